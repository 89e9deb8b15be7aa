"""Strike probability rasters from ensemble track sets.

A grid point is struck by a member when its track polyline (great-circle
segments between consecutive fixes) passes within the impact radius, so the
swath has no gaps between 6-hourly vertices. The strike probability is the
member fraction in percent; concurrent storms merge by pointwise maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import kernels
from ..errors import SpecMismatch
from ..gridcore.grid import GridSpec
from ..tracker.track import EnsembleTrackSet

#: default impact radius, 1 degree of latitude in km
DEFAULT_IMPACT_RADIUS_KM = 111.0


@dataclass(frozen=True)
class StrikeProbabilityField:
    """Per-grid-point strike probability in percent (multiples of 100/M)."""

    spec: GridSpec
    prob: np.ndarray
    impact_radius_km: float
    storm_ids: tuple[str, ...]

    def __post_init__(self):
        prob = np.asarray(self.prob, dtype=np.float64)
        object.__setattr__(self, "prob", prob)
        if prob.shape != self.spec.shape:
            raise ValueError("probability shape != grid shape")
        if prob.min() < 0.0 or prob.max() > 100.0:
            raise ValueError("strike probabilities must lie in [0, 100]")


def strike_probability(
    tracks: EnsembleTrackSet,
    grid: GridSpec,
    radius_km: float = DEFAULT_IMPACT_RADIUS_KM,
) -> StrikeProbabilityField:
    """Fraction of members whose track passes within ``radius_km``, in %."""
    if radius_km <= 0.0:
        raise ValueError("radius_km must be positive")
    lats = grid.lats()
    lons = grid.lons()
    counts = np.zeros(grid.shape, dtype=np.int64)
    for member in tracks.members:
        tlats = np.array([p.center.lat for p in member.points])
        tlons = np.array([p.center.lon for p in member.points])
        counts += kernels.polyline_within_radius(lats, lons, tlats, tlons, radius_km)
    prob = counts * (100.0 / tracks.n_members)
    return StrikeProbabilityField(grid, prob, radius_km, (tracks.storm_id,))


def merge_strike(fields: Sequence[StrikeProbabilityField]) -> StrikeProbabilityField:
    """Pointwise maximum over concurrent storms' strike fields."""
    if not fields:
        raise ValueError("merge_strike of zero fields")
    spec = fields[0].spec
    radius = fields[0].impact_radius_km
    for f in fields[1:]:
        if f.spec != spec:
            raise SpecMismatch("strike fields on different grids")
        if f.impact_radius_km != radius:
            raise SpecMismatch("strike fields with different impact radii")
    merged = np.maximum.reduce([f.prob for f in fields])
    storm_ids = tuple(sorted({s for f in fields for s in f.storm_ids}))
    return StrikeProbabilityField(spec, merged, radius, storm_ids)
