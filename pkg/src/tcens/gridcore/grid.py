"""Regular latitude-longitude raster data model.

A :class:`GridSpec` describes row/column geometry (rows may run north-to-south
via a negative ``dlat``; global grids may wrap in longitude). A :class:`Field`
couples one 2-D value array with its spec, variable tag, level tag and valid
time. A :class:`FieldSet` bundles the fields a tracker step needs at one time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from datetime import datetime
from typing import Iterable, Optional

import numpy as np

from ..errors import MissingField, SpecMismatch
from .geodesy import GeoPoint, normalize_lon

SURFACE = "surface"

#: variable names used for wind components per level tag
WIND_COMPONENTS = {SURFACE: ("u10", "v10")}


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a regular lat-lon grid.

    ``lat0``/``lon0`` are the coordinates of the (0, 0) grid point, ``dlat``
    (possibly negative) and ``dlon`` (positive) the row/column increments in
    degrees. ``wraps_lon`` marks globally periodic longitude.
    """

    lat0: float
    lon0: float
    dlat: float
    dlon: float
    nlat: int
    nlon: int
    wraps_lon: bool = False

    def __post_init__(self):
        if self.nlat < 2 or self.nlon < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if self.dlat == 0.0 or self.dlon <= 0.0:
            raise ValueError("dlat must be nonzero and dlon positive")
        if abs(self.dlat) * (self.nlat - 1) > 180.0 + 1e-9:
            raise ValueError("latitude span exceeds 180 degrees")
        if self.wraps_lon and self.dlon * self.nlon > 360.0 + 1e-9:
            raise ValueError("wrapped longitude span exceeds 360 degrees")
        last_lat = self.lat0 + self.dlat * (self.nlat - 1)
        if not (-90.0 - 1e-9 <= self.lat0 <= 90.0 + 1e-9) or not (
            -90.0 - 1e-9 <= last_lat <= 90.0 + 1e-9
        ):
            raise ValueError("grid latitudes leave [-90, 90]")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nlat, self.nlon)

    def lats(self) -> np.ndarray:
        return self.lat0 + self.dlat * np.arange(self.nlat, dtype=np.float64)

    def lons(self) -> np.ndarray:
        return self.lon0 + self.dlon * np.arange(self.nlon, dtype=np.float64)

    def latlon(self, i: int, j: int) -> tuple[float, float]:
        return (self.lat0 + self.dlat * i, normalize_lon(self.lon0 + self.dlon * j))

    def point(self, i: int, j: int) -> GeoPoint:
        return GeoPoint(*self.latlon(i, j))

    def _lon_offset(self, lon: float) -> float:
        """Longitude of ``lon`` measured from lon0, folded to (-180, 180]."""
        off = math.fmod(lon - self.lon0, 360.0)
        if off > 180.0:
            off -= 360.0
        elif off <= -180.0:
            off += 360.0
        return off

    def contains(self, p: GeoPoint, tol: float = 1e-9) -> bool:
        fi = (p.lat - self.lat0) / self.dlat
        if fi < -tol or fi > self.nlat - 1 + tol:
            return False
        if self.wraps_lon:
            return True
        off = self._lon_offset(p.lon)
        if off < 0.0:
            off += 360.0  # grids may span past +180
        fj = off / self.dlon
        return -tol <= fj <= self.nlon - 1 + tol

    def nearest_index(self, p: GeoPoint) -> tuple[int, int]:
        """Indices of the grid point closest to ``p`` (clamped to the grid)."""
        i = int(round((p.lat - self.lat0) / self.dlat))
        i = min(max(i, 0), self.nlat - 1)
        if self.wraps_lon:
            j = int(round(((p.lon - self.lon0) % 360.0) / self.dlon)) % self.nlon
        else:
            off = self._lon_offset(p.lon)
            if off < 0.0:
                off += 360.0
            j = int(round(off / self.dlon))
            j = min(max(j, 0), self.nlon - 1)
        return i, j


@dataclass(frozen=True)
class Field:
    """One scalar variable on a grid at one level and valid time.

    ``values`` has shape (nlat, nlon). Non-finite values are rejected unless
    covered by an explicit boolean ``mask`` (True = missing).
    """

    spec: GridSpec
    values: np.ndarray
    variable: str
    level: str
    valid_time: datetime
    mask: Optional[np.ndarray] = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.shape != self.spec.shape:
            raise ValueError(f"values shape {vals.shape} != grid shape {self.spec.shape}")
        if self.mask is not None:
            m = np.asarray(self.mask, dtype=bool)
            if m.shape != vals.shape:
                raise ValueError("mask shape mismatch")
            object.__setattr__(self, "mask", m)
            bad = ~np.isfinite(vals) & ~m
        else:
            bad = ~np.isfinite(vals)
        if bad.any():
            raise ValueError(f"{int(bad.sum())} non-finite values outside mask")

    def with_values(self, values: np.ndarray, variable: str | None = None,
                    mask: np.ndarray | None = None) -> "Field":
        return Field(self.spec, values, variable or self.variable, self.level,
                     self.valid_time, mask)

    def masked_values(self) -> np.ndarray:
        """Values with missing entries as NaN (copy only when masked)."""
        if self.mask is None:
            return self.values
        out = self.values.copy()
        out[self.mask] = np.nan
        return out


def require_same_spec(*fields: Field) -> GridSpec:
    spec = fields[0].spec
    for f in fields[1:]:
        if f.spec != spec:
            raise SpecMismatch(f"{f.variable}@{f.level} on a different grid")
    return spec


class FieldSet:
    """The per-time bundle of fields a tracker step consumes.

    Keyed by (variable, level). Derived 2-D diagnostics (wind speed, relative
    vorticity) are computed lazily and cached; the cache is an implementation
    detail and does not break value immutability.
    """

    def __init__(self, fields: Iterable[Field]):
        self._fields: dict[tuple[str, str], Field] = {}
        self._vorticity: dict[str, Field] = {}
        times = set()
        for f in fields:
            key = (f.variable, f.level)
            if key in self._fields:
                raise ValueError(f"duplicate field {key}")
            self._fields[key] = f
            times.add(f.valid_time)
        if not self._fields:
            raise ValueError("empty FieldSet")
        if len(times) != 1:
            raise ValueError(f"fields span multiple valid times: {sorted(times)}")
        self.valid_time: datetime = times.pop()

    def __contains__(self, key: tuple[str, str]) -> bool:
        return key in self._fields

    def keys(self):
        return self._fields.keys()

    def get(self, variable: str, level: str) -> Field:
        try:
            return self._fields[(variable, level)]
        except KeyError:
            raise MissingField(f"{variable}@{level} at {self.valid_time.isoformat()}") from None

    def has(self, variable: str, level: str) -> bool:
        return (variable, level) in self._fields

    def wind(self, level: str) -> tuple[Field, Field]:
        uvar, vvar = WIND_COMPONENTS.get(level, ("u", "v"))
        return self.get(uvar, level), self.get(vvar, level)

    def wind_speed(self, level: str) -> Field:
        u, v = self.wind(level)
        require_same_spec(u, v)
        return u.with_values(np.hypot(u.values, v.values), variable="ws")

    def vorticity(self, level: str) -> Field:
        """Relative vorticity of the winds at ``level`` (cached)."""
        if level not in self._vorticity:
            from .raster import relative_vorticity

            u, v = self.wind(level)
            self._vorticity[level] = relative_vorticity(u, v)
        return self._vorticity[level]


@dataclass(frozen=True)
class Region:
    """A query disc: center point plus radius in kilometers."""

    center: GeoPoint
    radius_km: float

    def __post_init__(self):
        if self.radius_km <= 0.0:
            raise ValueError("radius must be positive")
