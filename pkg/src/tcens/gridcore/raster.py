"""Finite-difference derivatives and resampling on regular lat-lon grids."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainMismatch, IncompatibleFactor, SpecMismatch
from .grid import Field, GridSpec, require_same_spec

EARTH_RADIUS_M = 6_371_000.0

#: rows poleward of this latitude are masked in vorticity (cos(lat) -> 0)
POLAR_MASK_LAT = 89.0


def relative_vorticity(u: Field, v: Field) -> Field:
    """Vertical component of relative vorticity, dv/dx - du/dy, in 1/s.

    Centered differences with spherical metric factors (dx = R cos(lat) dlon,
    dy = R dlat), one-sided at non-periodic edges. Rows poleward of +-89 deg
    are masked; missing input values propagate into the output mask.
    """
    spec = require_same_spec(u, v)
    if u.level != v.level:
        raise SpecMismatch(f"wind components on different levels: {u.level} vs {v.level}")
    if u.valid_time != v.valid_time:
        raise SpecMismatch("wind components at different valid times")

    uv = u.masked_values()
    vv = v.masked_values()
    lats = spec.lats()
    polar = np.abs(lats) > POLAR_MASK_LAT
    coslat = np.cos(np.deg2rad(lats))
    coslat[polar] = 1.0  # dummy, rows are masked below

    dx = EARTH_RADIUS_M * math.radians(spec.dlon) * coslat  # meters per column step
    dy = EARTH_RADIUS_M * math.radians(spec.dlat)  # signed meters per row step

    if spec.wraps_lon:
        dvdlam = (np.roll(vv, -1, axis=1) - np.roll(vv, 1, axis=1)) / 2.0
    else:
        dvdlam = np.gradient(vv, axis=1)
    dudphi = np.gradient(uv, axis=0)

    zeta = dvdlam / dx[:, None] - dudphi / dy
    zeta[polar, :] = np.nan
    bad = ~np.isfinite(zeta)
    return Field(spec, zeta, "vo", u.level, u.valid_time, mask=bad if bad.any() else None)


def downsample(f: Field, factor: int) -> Field:
    """Stride-subsample a field, keeping every ``factor``-th point.

    The grid origin is preserved. With the default tracker factor of 5 this
    maps a 0.25-degree grid onto 1.25 degrees. Raises
    :class:`IncompatibleFactor` when the shape does not divide.
    """
    if int(factor) != factor or factor < 2:
        raise IncompatibleFactor(f"factor must be an integer >= 2, got {factor}")
    factor = int(factor)
    spec = f.spec
    if (spec.nlat - 1) % factor != 0:
        raise IncompatibleFactor(f"nlat-1 = {spec.nlat - 1} not divisible by {factor}")
    nlat_c = (spec.nlat - 1) // factor + 1
    if spec.wraps_lon:
        if spec.nlon % factor != 0:
            raise IncompatibleFactor(f"nlon = {spec.nlon} not divisible by {factor}")
        nlon_c = spec.nlon // factor
    else:
        if (spec.nlon - 1) % factor != 0:
            raise IncompatibleFactor(f"nlon-1 = {spec.nlon - 1} not divisible by {factor}")
        nlon_c = (spec.nlon - 1) // factor + 1
    coarse = GridSpec(
        lat0=spec.lat0,
        lon0=spec.lon0,
        dlat=spec.dlat * factor,
        dlon=spec.dlon * factor,
        nlat=nlat_c,
        nlon=nlon_c,
        wraps_lon=spec.wraps_lon,
    )
    vals = f.values[::factor, ::factor]
    mask = None if f.mask is None else f.mask[::factor, ::factor]
    return Field(coarse, vals, f.variable, f.level, f.valid_time, mask)


def upsample(f: Field, target: GridSpec) -> Field:
    """Bilinear interpolation of a field onto ``target``.

    Every target point must lie inside the source domain
    (:class:`DomainMismatch` otherwise); wrapped source grids interpolate
    across the dateline seam.
    """
    src = f.spec
    tol = 1e-9
    fi = (target.lats() - src.lat0) / src.dlat
    if fi.min() < -tol or fi.max() > src.nlat - 1 + tol:
        raise DomainMismatch("target latitudes outside source grid")

    off = np.mod(target.lons() - src.lon0, 360.0)
    if src.wraps_lon:
        fj = off / src.dlon
    else:
        span = (src.nlon - 1) * src.dlon
        # fold near-360 offsets (float noise on the west edge) back to 0
        off = np.where(off > span + 180.0, off - 360.0, off)
        if off.min() < -tol or off.max() > span + tol:
            raise DomainMismatch("target longitudes outside source grid")
        fj = np.clip(off, 0.0, span) / src.dlon

    fi = np.clip(fi, 0.0, src.nlat - 1)
    i0 = np.minimum(fi.astype(np.int64), src.nlat - 2)
    wi = fi - i0
    if src.wraps_lon:
        j0 = fj.astype(np.int64) % src.nlon
        j1 = (j0 + 1) % src.nlon
        wj = fj - np.floor(fj)
    else:
        fj = np.clip(fj, 0.0, src.nlon - 1)
        j0 = np.minimum(fj.astype(np.int64), src.nlon - 2)
        j1 = j0 + 1
        wj = fj - j0

    vals = f.masked_values()
    v00 = vals[np.ix_(i0, j0)]
    v01 = vals[np.ix_(i0, j1)]
    v10 = vals[np.ix_(i0 + 1, j0)]
    v11 = vals[np.ix_(i0 + 1, j1)]
    wi = wi[:, None]
    wj = wj[None, :]
    out = (
        v00 * (1.0 - wi) * (1.0 - wj)
        + v01 * (1.0 - wi) * wj
        + v10 * wi * (1.0 - wj)
        + v11 * wi * wj
    )
    bad = ~np.isfinite(out)
    return Field(target, out, f.variable, f.level, f.valid_time, mask=bad if bad.any() else None)


def area_mean(f: Field) -> float:
    """Cosine-latitude weighted mean of the finite field values."""
    w = np.cos(np.deg2rad(f.spec.lats()))[:, None] * np.ones((1, f.spec.nlon))
    vals = f.masked_values()
    ok = np.isfinite(vals)
    return float(np.sum(vals[ok] * w[ok]) / np.sum(w[ok]))
