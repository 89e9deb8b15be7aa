"""Ensemble track position metrics and the along-/cross-track decomposition.

Distances are great-circle kilometers throughout: the mean position error is
the RMSE over cases of the ensemble-mean-to-observed distance, the spread the
RMSE over cases and members of the member-to-ensemble-mean distance, and the
accumulated variants sum the per-lead metrics over a lead-time window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Sequence

from ..errors import CoincidentObservations, EmptyInput
from ..gridcore.geodesy import GeoPoint, azimuth_deg, haversine_km

_COINCIDENT_KM = 1e-9


@dataclass(frozen=True)
class TrackErrorSample:
    """Per-(storm, init, lead) error decomposition of the ensemble mean.

    ``error_km`` is this case's contribution to the mean position error,
    ``spread_km`` the root mean squared member-to-mean distance; ``at_km`` /
    ``ct_km`` are the signed along-/cross-track components of the direct
    position error ``dpe_km`` (None at the first lead, which has no observed
    motion direction yet).
    """

    storm_id: str
    init_time: datetime
    lead_h: float
    error_km: float
    spread_km: float
    at_km: float | None
    ct_km: float | None
    dpe_km: float

    def __post_init__(self):
        if min(self.error_km, self.spread_km, self.dpe_km) < 0.0:
            raise ValueError("error, spread and dpe must be nonnegative")
        if self.at_km is not None and self.ct_km is not None and self.dpe_km > 0.0:
            residual = abs(self.at_km**2 + self.ct_km**2 - self.dpe_km**2)
            if residual > 1e-6 * self.dpe_km**2:
                raise ValueError("AT^2 + CT^2 != DPE^2")


def error_tc(cases: Sequence[tuple[GeoPoint, GeoPoint]]) -> float:
    """RMSE of (ensemble-mean, observed) position pairs at one lead time."""
    if not cases:
        raise EmptyInput("error_tc of zero cases")
    sq = [haversine_km(mean, obs) ** 2 for mean, obs in cases]
    return math.sqrt(sum(sq) / len(sq))


def spread_tc(cases: Sequence[tuple[Sequence[GeoPoint], GeoPoint]]) -> float:
    """RMSE of member positions about the ensemble mean at one lead time.

    Each case is (surviving member positions, ensemble mean position);
    the inner mean runs over that case's members, the outer over cases.
    """
    if not cases:
        raise EmptyInput("spread_tc of zero cases")
    means = []
    for members, center in cases:
        if not members:
            raise EmptyInput("spread_tc case with zero members")
        means.append(
            sum(haversine_km(p, center) ** 2 for p in members) / len(members)
        )
    return math.sqrt(sum(means) / len(means))


def acc_error(per_lead: Iterable[float]) -> float:
    """Accumulated mean position error: sum over the lead-time window."""
    vals = list(per_lead)
    if not vals:
        raise EmptyInput("accumulation over an empty lead window")
    return float(sum(vals))


def acc_spread(per_lead: Iterable[float]) -> float:
    """Accumulated ensemble spread: sum over the lead-time window."""
    return acc_error(per_lead)


def along_cross(ob1: GeoPoint, ob2: GeoPoint, fc: GeoPoint) -> tuple[float, float, float]:
    """Decompose the forecast position error about the observed motion.

    ``ob1`` and ``ob2`` are consecutive observed positions and ``fc`` the
    forecast position verifying at ``ob2``'s time. Returns (AT, CT, DPE):
    DPE is the great-circle distance from ``ob2`` to ``fc``; with the bearing
    difference D = azimuth(ob2->fc) - azimuth(ob1->ob2), AT = DPE cos D
    (positive ahead of the track) and CT = DPE sin D (positive right of the
    track), so AT^2 + CT^2 = DPE^2 identically.
    """
    if haversine_km(ob1, ob2) < _COINCIDENT_KM:
        raise CoincidentObservations("observed positions coincide")
    dpe = haversine_km(ob2, fc)
    if dpe < _COINCIDENT_KM:
        return 0.0, 0.0, 0.0
    delta = math.radians(azimuth_deg(ob2, fc) - azimuth_deg(ob1, ob2))
    return dpe * math.cos(delta), dpe * math.sin(delta), dpe
