"""Pure-numpy implementations of the hot raster kernels.

These are the fallback backend; `tcens.kernels._c` provides the compiled
twin with identical semantics. All functions take plain float64 arrays in
degrees/kilometers and are NaN-aware (NaN = missing).
"""

from __future__ import annotations

import numpy as np

EARTH_RADIUS_KM = 6371.0
_KM_PER_DEG = np.pi / 180.0 * EARTH_RADIUS_KM


def _haversine_km(lat1, lon1, lat2, lon2):
    phi1 = np.deg2rad(lat1)
    phi2 = np.deg2rad(lat2)
    h = (
        np.sin((phi2 - phi1) / 2.0) ** 2
        + np.cos(phi1) * np.cos(phi2) * np.sin((np.deg2rad(lon2) - np.deg2rad(lon1)) / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))


def local_extrema_mask(values: np.ndarray, find_max: bool, wrap_lon: bool) -> np.ndarray:
    """Boolean mask of grid points strictly more extreme than all 8 neighbors.

    Points lacking a full 8-neighborhood (grid edges, unless longitude wraps)
    and points with any missing value in the stencil are never extrema;
    plateau points fail the strict comparison.
    """
    s = np.asarray(values, dtype=np.float64)
    if not find_max:
        s = -s
    ny, nx = s.shape
    if wrap_lon:
        padded = np.concatenate([s[:, -1:], s, s[:, :1]], axis=1)
    else:
        col = np.full((ny, 1), np.nan)
        padded = np.concatenate([col, s, col], axis=1)
    row = np.full((1, padded.shape[1]), np.nan)
    padded = np.concatenate([row, padded, row], axis=0)

    neighbors = [
        padded[1 + di : 1 + di + ny, 1 + dj : 1 + dj + nx]
        for di in (-1, 0, 1)
        for dj in (-1, 0, 1)
        if (di, dj) != (0, 0)
    ]
    # np.maximum propagates NaN, so a missing neighbor disqualifies the point
    return s > np.maximum.reduce(neighbors)


def neighborhood_extreme(
    values: np.ndarray,
    lats: np.ndarray,
    lons: np.ndarray,
    clat: float,
    clon: float,
    radius_km: float,
    find_max: bool,
    wrap_lon: bool,
) -> tuple[int, int]:
    """Index of the extreme value within ``radius_km`` of (clat, clon).

    Ties break toward the smallest distance to the center, then the smallest
    (row, column) index. Returns (-1, -1) when no finite in-radius value
    exists. ``wrap_lon`` is implicit in the haversine metric; it is accepted
    for signature parity with the compiled backend.
    """
    del wrap_lon
    vals = np.asarray(values, dtype=np.float64)
    lats = np.asarray(lats, dtype=np.float64)
    lons = np.asarray(lons, dtype=np.float64)
    band = np.flatnonzero(np.abs(lats - clat) <= radius_km / _KM_PER_DEG + 1e-9)
    if band.size == 0:
        return (-1, -1)
    dist = _haversine_km(lats[band][:, None], lons[None, :], clat, clon)
    ok = (dist <= radius_km) & np.isfinite(vals[band, :])
    if not ok.any():
        return (-1, -1)
    ii, jj = np.nonzero(ok)
    v = vals[band[ii], jj]
    key = -v if find_max else v
    best = np.lexsort((jj, ii, dist[ii, jj], key))[0]
    return (int(band[ii[best]]), int(jj[best]))


def _unit_vectors(lat_deg, lon_deg):
    phi = np.deg2rad(lat_deg)
    lam = np.deg2rad(lon_deg)
    cphi = np.cos(phi)
    return np.stack([cphi * np.cos(lam), cphi * np.sin(lam), np.sin(phi)], axis=-1)


def _angle_to(p, v):
    """Angular distance from each row of ``p`` (n,3) to the unit vector ``v``."""
    dots = p @ v
    crosses = np.linalg.norm(np.cross(p, v), axis=-1)
    return np.arctan2(crosses, dots)


def polyline_within_radius(
    lats: np.ndarray,
    lons: np.ndarray,
    track_lats: np.ndarray,
    track_lons: np.ndarray,
    radius_km: float,
) -> np.ndarray:
    """Mask of grid points within ``radius_km`` of a great-circle polyline.

    The polyline is the chain of great-circle segments between consecutive
    track vertices; distance is point-to-segment (cross-track distance when
    the perpendicular foot falls on the arc, else distance to the nearest
    endpoint), so points between 6-hourly vertices still register.
    """
    lats = np.asarray(lats, dtype=np.float64)
    lons = np.asarray(lons, dtype=np.float64)
    tlats = np.atleast_1d(np.asarray(track_lats, dtype=np.float64))
    tlons = np.atleast_1d(np.asarray(track_lons, dtype=np.float64))
    ny, nx = lats.size, lons.size
    ang_r = radius_km / EARTH_RADIUS_KM

    grid = _unit_vectors(np.repeat(lats, nx), np.tile(lons, ny))
    verts = _unit_vectors(tlats, tlons)
    within = np.zeros(ny * nx, dtype=bool)
    if verts.shape[0] == 1:
        return (_angle_to(grid, verts[0]) <= ang_r).reshape(ny, nx)

    active = np.arange(ny * nx)
    pts = grid
    for k in range(verts.shape[0] - 1):
        a, b = verts[k], verts[k + 1]
        normal = np.cross(a, b)
        nn = np.linalg.norm(normal)
        d_a = _angle_to(pts, a)
        if nn < 1e-12:
            dist = d_a  # degenerate segment: stationary track step
        else:
            normal = normal / nn
            c = pts @ normal
            foot = pts - np.outer(c, normal)
            on_arc = (foot @ np.cross(normal, a) >= 0.0) & (foot @ np.cross(normal, b) <= 0.0)
            d_end = np.minimum(d_a, _angle_to(pts, b))
            d_arc = np.abs(np.arcsin(np.clip(c, -1.0, 1.0)))
            dist = np.where(on_arc, d_arc, d_end)
        hit = dist <= ang_r
        within[active[hit]] = True
        active = active[~hit]
        pts = pts[~hit]
        if active.size == 0:
            break
    return within.reshape(ny, nx)
