"""Radius-limited queries against gridded fields."""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..errors import EmptyNeighborhood
from .geodesy import GeoPoint, haversine_km_arrays
from .grid import Field


def neighborhood_extreme(
    f: Field, center: GeoPoint, radius_km: float, mode: str
) -> tuple[float, GeoPoint]:
    """Extreme value and its location among grid points within a radius.

    ``mode`` is 'min' or 'max'. Ties break toward the smallest distance to
    the center, then the smallest (row, column) index, so results are
    deterministic across platforms. Raises :class:`EmptyNeighborhood` when
    no finite grid value lies within the radius.
    """
    if radius_km <= 0.0:
        raise ValueError("radius_km must be positive")
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    i, j = kernels.neighborhood_extreme(
        f.masked_values(),
        f.spec.lats(),
        f.spec.lons(),
        center.lat,
        center.lon,
        radius_km,
        mode == "max",
        f.spec.wraps_lon,
    )
    if i < 0:
        raise EmptyNeighborhood(
            f"no grid point within {radius_km} km of ({center.lat}, {center.lon})"
        )
    return float(f.values[i, j]), f.spec.point(i, j)


def local_extrema(
    f: Field, center: GeoPoint, radius_km: float, mode: str
) -> list[tuple[GeoPoint, float]]:
    """All strict 8-neighbor extrema within ``radius_km`` of ``center``.

    Plateau points and points without a full 8-neighborhood are excluded.
    Results are sorted by distance to the center (ties by grid index); the
    list may be empty.
    """
    if radius_km <= 0.0:
        raise ValueError("radius_km must be positive")
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    mask = kernels.local_extrema_mask(f.masked_values(), mode == "max", f.spec.wraps_lon)
    ii, jj = np.nonzero(mask)
    if ii.size == 0:
        return []
    lats = f.spec.lats()[ii]
    lons = f.spec.lons()[jj]
    dist = haversine_km_arrays(lats, lons, center.lat, center.lon)
    keep = dist <= radius_km
    order = np.lexsort((jj[keep], ii[keep], dist[keep]))
    return [
        (f.spec.point(int(i), int(j)), float(f.values[i, j]))
        for i, j in zip(ii[keep][order], jj[keep][order])
    ]
