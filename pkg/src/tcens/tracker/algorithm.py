"""Cyclone center identification and tracking through gridded forecasts.

The per-step loop: predict a first-guess position (advection of steering
winds, blended with linear extrapolation once two fixes exist), collect
candidate centers (sea-level-pressure minima and 10 m wind-vorticity maxima
on a coarsened grid, refined on the native grid), validate them against the
vorticity / over-land wind / thickness criteria, take the nearest validated
candidate, cap the implied displacement, and append the fix. Tracking stops
at the first step with no validated candidate.
"""

from __future__ import annotations

import math
from datetime import datetime, timedelta
from typing import Mapping, Sequence

import numpy as np

from ..errors import (
    EmptyNeighborhood,
    MissingField,
    MissingSteeringFields,
    SeedOutsideDomain,
    TcensError,
)
from ..gridcore.geodesy import (
    GeoPoint,
    azimuth_deg,
    continuation_bearing,
    destination,
    displace_tangent,
    haversine_km,
    haversine_km_arrays,
    normalize_lon,
    spherical_centroid,
)
from ..gridcore.grid import SURFACE, Field, FieldSet
from ..gridcore.neighborhood import local_extrema, neighborhood_extreme
from ..gridcore.raster import downsample, relative_vorticity
from .config import TrackerConfig
from .track import EnsembleTrackSet, Track, TrackPoint

_COINCIDENT_KM = 1e-9


def _disc_mean(f: Field, center: GeoPoint, radius_km: float) -> float:
    """Mean of finite grid values within a radius (nearest value if none)."""
    spec = f.spec
    lats = spec.lats()
    band = np.flatnonzero(np.abs(lats - center.lat) <= radius_km / 111.19 + 1e-9)
    vals = f.masked_values()
    if band.size:
        dist = haversine_km_arrays(lats[band][:, None], spec.lons()[None, :], center.lat, center.lon)
        sub = vals[band, :]
        ok = (dist <= radius_km) & np.isfinite(sub)
        if ok.any():
            return float(sub[ok].mean())
    i, j = spec.nearest_index(center)
    return float(vals[i, j])


def steering_wind(fields: FieldSet, center: GeoPoint, cfg: TrackerConfig) -> tuple[float, float]:
    """Weighted mean (u, v) of the steering-level winds around ``center``."""
    u_total = 0.0
    v_total = 0.0
    for level, weight in cfg.steering_levels.items():
        try:
            u, v = fields.wind(level)
        except MissingField as exc:
            raise MissingSteeringFields(str(exc)) from None
        u_total += weight * _disc_mean(u, center, cfg.steering_avg_radius_km)
        v_total += weight * _disc_mean(v, center, cfg.steering_avg_radius_km)
    return u_total, v_total


def advection_guess(
    last: TrackPoint, fields: FieldSet, cfg: TrackerConfig
) -> tuple[GeoPoint, float]:
    """Displace the last fix by the steering wind over one forecast step.

    Returns the displaced point and the displacement magnitude in km.
    """
    u, v = steering_wind(fields, last.center, cfg)
    dt_s = cfg.step_hours * 3600.0
    east_km = u * dt_s / 1000.0
    north_km = v * dt_s / 1000.0
    return displace_tangent(last.center, east_km, north_km), math.hypot(east_km, north_km)


def first_guess(
    history: Sequence[TrackPoint], fields: FieldSet, cfg: TrackerConfig
) -> GeoPoint:
    """Predicted next center from up to two previous fixes.

    One fix: pure advection. Two fixes: spherical midpoint of the great-circle
    linear extrapolation and the advection estimate. ``fields`` is the bundle
    valid at the last fix's time (the flow that carries the storm forward).
    """
    if not history:
        raise ValueError("first_guess needs at least one track point")
    adv, _ = advection_guess(history[-1], fields, cfg)
    if len(history) == 1:
        return adv
    prev, last = history[-2], history[-1]
    dist = haversine_km(prev.center, last.center)
    if dist < _COINCIDENT_KM:
        extrap = last.center
    else:
        extrap = destination(last.center, continuation_bearing(prev.center, last.center), dist)
    return spherical_centroid([extrap, adv])


def _abs_vorticity_field(fields: FieldSet, level: str) -> Field:
    vort = fields.vorticity(level)
    return vort.with_values(np.abs(vort.masked_values()), mask=vort.mask)


def _refine_candidate(coarse_point: GeoPoint, fine: Field, factor: int, find_max: bool) -> GeoPoint:
    """Relocate a coarse-grid extremum to the native-grid extremum inside
    the originating coarse cell."""
    spec = fine.spec
    ci, cj = spec.nearest_index(coarse_point)
    half = factor // 2
    i0, i1 = max(ci - half, 0), min(ci + half, spec.nlat - 1)
    vals = fine.masked_values()
    if spec.wraps_lon:
        cols = [(cj + dj) % spec.nlon for dj in range(-half, half + 1)]
    else:
        cols = list(range(max(cj - half, 0), min(cj + half, spec.nlon - 1) + 1))
    window = vals[i0 : i1 + 1][:, cols]
    if not np.isfinite(window).any():
        return coarse_point
    flat = np.where(np.isfinite(window), window, -np.inf if find_max else np.inf)
    k = int(np.argmax(flat)) if find_max else int(np.argmin(flat))
    di, dj = divmod(k, len(cols))
    return spec.point(i0 + di, cols[dj])


def find_candidates(fields: FieldSet, guess: GeoPoint, cfg: TrackerConfig) -> list[GeoPoint]:
    """Candidate centers near the first guess, nearest first.

    MSL minima and 10 m wind |vorticity| maxima are located on a grid
    coarsened by ``cfg.coarsen_factor`` (suppressing spurious extrema from
    smooth forecasts), refined to the native grid within one coarse cell,
    then deduplicated at one coarse cell and limited to the search radius.
    """
    msl = fields.get("msl", SURFACE)
    u10, v10 = fields.wind(cfg.candidate_vorticity_level)
    factor = cfg.coarsen_factor

    msl_c = downsample(msl, factor)
    vort_c = relative_vorticity(downsample(u10, factor), downsample(v10, factor))
    abs_vort_c = vort_c.with_values(np.abs(vort_c.masked_values()), mask=vort_c.mask)
    abs_vort = _abs_vorticity_field(fields, cfg.candidate_vorticity_level)

    refined: list[GeoPoint] = []
    for coarse_field, fine_field, find_max in (
        (msl_c, msl, False),
        (abs_vort_c, abs_vort, True),
    ):
        for point, _value in local_extrema(
            coarse_field, guess, cfg.search_radius_km, "max" if find_max else "min"
        ):
            refined.append(_refine_candidate(point, fine_field, factor, find_max))

    refined = [c for c in refined if haversine_km(c, guess) <= cfg.search_radius_km]
    refined.sort(key=lambda c: (haversine_km(c, guess), c.lat, c.lon))

    coarse_dlat = abs(msl_c.spec.dlat)
    coarse_dlon = msl_c.spec.dlon
    kept: list[GeoPoint] = []
    for c in refined:
        duplicate = any(
            abs(c.lat - k.lat) < coarse_dlat and abs(normalize_lon(c.lon - k.lon)) < coarse_dlon
            for k in kept
        )
        if not duplicate:
            kept.append(c)
    return kept


def validate_candidate(
    candidate: GeoPoint,
    fields: FieldSet,
    land_mask: Field | None,
    phase: str,
    cfg: TrackerConfig,
) -> tuple[bool, str | None]:
    """Check a candidate against the cyclone criteria.

    Criteria within ``cfg.criteria_radius_km`` of the candidate:
    (a) max 850 hPa |vorticity| >= ``vort_threshold``;
    (b) over land only: max 10 m wind speed > ``wind10m_threshold``
        (skipped entirely when no land mask is supplied);
    (c) for extratropical fixes, when enabled: a local maximum of the
        850-200 hPa geopotential thickness must exist.

    Returns (True, None) or (False, failed-criterion name).
    """
    try:
        vmax, _ = neighborhood_extreme(
            _abs_vorticity_field(fields, cfg.validation_vorticity_level),
            candidate,
            cfg.criteria_radius_km,
            "max",
        )
    except EmptyNeighborhood:
        return False, "vorticity"
    if not vmax >= cfg.vort_threshold:
        return False, "vorticity"

    if land_mask is not None:
        i, j = land_mask.spec.nearest_index(candidate)
        if land_mask.values[i, j] > 0.5:
            wmax, _ = neighborhood_extreme(
                fields.wind_speed(SURFACE), candidate, cfg.criteria_radius_km, "max"
            )
            if not wmax > cfg.wind10m_threshold:
                return False, "wind"

    if phase == "extratropical" and cfg.require_thickness_max_when_extratropical:
        lo, hi = cfg.thickness_levels
        zlo = fields.get("z", lo)
        zhi = fields.get("z", hi)
        thickness = zlo.with_values(zhi.masked_values() - zlo.masked_values(), variable="thickness")
        if not local_extrema(thickness, candidate, cfg.criteria_radius_km, "max"):
            return False, "thickness"

    return True, None


def constrain_displacement(
    prev_disp_km: float,
    proposed: GeoPoint,
    from_point: GeoPoint,
    cfg: TrackerConfig,
    advection_disp_km: float = 0.0,
) -> GeoPoint:
    """Cap the step displacement at 3x the previous displacement.

    With no previous displacement (first step) the cap is the advection
    displacement magnitude, floored at ``cfg.first_step_cap_floor_km``.
    Over-cap proposals are pulled back along the great circle to the cap.
    """
    if prev_disp_km < 0.0:
        raise ValueError("prev_disp_km must be nonnegative")
    if prev_disp_km > 0.0:
        cap = cfg.max_displacement_factor * prev_disp_km
    else:
        cap = max(advection_disp_km, cfg.first_step_cap_floor_km)
    dist = haversine_km(from_point, proposed)
    if dist <= cap or dist < _COINCIDENT_KM:
        return proposed
    return destination(from_point, azimuth_deg(from_point, proposed), cap)


def _check_run(run: Sequence[FieldSet], seed: TrackPoint) -> None:
    if len(run) < 2:
        raise ValueError("run must cover the init time and at least one step")
    times = [fs.valid_time for fs in run]
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise ValueError("run FieldSets must be strictly time-ordered")
    if times[0] != seed.valid_time:
        raise ValueError(
            f"seed time {seed.valid_time.isoformat()} != first run time {times[0].isoformat()}"
        )
    msl = run[0].get("msl", SURFACE)
    if not msl.spec.contains(seed.center):
        raise SeedOutsideDomain(f"seed {seed.center} outside forecast grid")


def track_member(
    run: Sequence[FieldSet],
    seed: TrackPoint,
    cfg: TrackerConfig | None = None,
    land_mask: Field | None = None,
    phase_by_time: Mapping[datetime, str] | None = None,
    storm_id: str = "TC",
    member_id=0,
) -> Track:
    """Track one member from an observed seed until loss of the cyclone.

    The returned track starts with the seed; each subsequent step appends the
    nearest validated candidate (displacement-capped) with intensity
    attributes read from the criteria-radius neighborhood, and the track ends
    at the first step with no validated candidate. Deterministic: identical
    inputs yield identical tracks.
    """
    cfg = cfg or TrackerConfig()
    _check_run(run, seed)

    points = [seed]
    prev_disp = 0.0
    for step in range(1, len(run)):
        fields_prev = run[step - 1]
        fields_now = run[step]
        guess = first_guess(points[-2:], fields_prev, cfg)
        _, adv_disp = advection_guess(points[-1], fields_prev, cfg)

        phase = points[-1].phase
        if phase_by_time and fields_now.valid_time in phase_by_time:
            phase = phase_by_time[fields_now.valid_time]

        selected = None
        for cand in find_candidates(fields_now, guess, cfg):
            ok, _reason = validate_candidate(cand, fields_now, land_mask, phase, cfg)
            if ok:
                selected = cand
                break
        if selected is None:
            break

        center = constrain_displacement(prev_disp, selected, points[-1].center, cfg, adv_disp)
        min_msl, _ = neighborhood_extreme(
            fields_now.get("msl", SURFACE), center, cfg.criteria_radius_km, "min"
        )
        max_ws, _ = neighborhood_extreme(
            fields_now.wind_speed(SURFACE), center, cfg.criteria_radius_km, "max"
        )
        points.append(TrackPoint(fields_now.valid_time, center, min_msl, max_ws, phase))
        prev_disp = haversine_km(points[-2].center, center)

    return Track(storm_id, member_id, points)


def track_ensemble(
    runs: Mapping[int, Sequence[FieldSet]],
    seed: TrackPoint,
    cfg: TrackerConfig | None = None,
    land_mask: Field | None = None,
    phase_by_time: Mapping[datetime, str] | None = None,
    storm_id: str = "TC",
) -> EnsembleTrackSet:
    """Track every member independently and attach the ensemble-mean track."""
    if not runs:
        raise ValueError("track_ensemble needs at least one member run")
    members = []
    for member_id in sorted(runs):
        try:
            members.append(
                track_member(
                    runs[member_id],
                    seed,
                    cfg,
                    land_mask=land_mask,
                    phase_by_time=phase_by_time,
                    storm_id=storm_id,
                    member_id=member_id,
                )
            )
        except TcensError as exc:
            raise type(exc)(f"member {member_id}: {exc}") from exc
    return EnsembleTrackSet(storm_id=storm_id, init_time=seed.valid_time, members=members)
