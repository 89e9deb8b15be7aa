"""Track containers and the track CSV interchange format.

CSV columns: ``storm_id,member_id,valid_time,lat,lon,min_msl_pa,max_ws10m_ms,
phase`` with ISO-8601 times. ``member_id`` is an ensemble member index or one
of the sentinels ``MEAN`` (ensemble mean track) / ``OBS`` (observed track).
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from ..gridcore.geodesy import GeoPoint, spherical_centroid
from ..ioutil import atomic_write_text

MEAN_MEMBER = "MEAN"
OBS_MEMBER = "OBS"

TROPICAL = "tropical"
EXTRATROPICAL = "extratropical"

MemberId = Union[int, str]

MSL_MIN_PA = 85000.0
MSL_MAX_PA = 108000.0


@dataclass(frozen=True)
class TrackPoint:
    """One cyclone fix: time, center and intensity attributes."""

    valid_time: datetime
    center: GeoPoint
    min_msl: float
    max_ws10m: float
    phase: str = TROPICAL

    def __post_init__(self):
        if not MSL_MIN_PA < self.min_msl < MSL_MAX_PA:
            raise ValueError(f"min_msl {self.min_msl} Pa outside ({MSL_MIN_PA}, {MSL_MAX_PA})")
        if self.max_ws10m < 0.0:
            raise ValueError("max_ws10m must be nonnegative")
        if self.phase not in (TROPICAL, EXTRATROPICAL):
            raise ValueError(f"unknown phase {self.phase!r}")


@dataclass
class Track:
    """Time-ordered cyclone fixes for one storm and member."""

    storm_id: str
    member_id: MemberId
    points: list[TrackPoint]

    def __post_init__(self):
        if not self.points:
            raise ValueError("track needs at least one point")
        times = [p.valid_time for p in self.points]
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ValueError("track times must be strictly increasing")
        gaps = {t2 - t1 for t1, t2 in zip(times, times[1:])}
        if len(gaps) > 1:
            raise ValueError(f"track time gaps are not uniform: {sorted(gaps)}")
        self._by_time: dict[datetime, TrackPoint] = {p.valid_time: p for p in self.points}

    @property
    def init_time(self) -> datetime:
        return self.points[0].valid_time

    @property
    def step(self) -> timedelta | None:
        if len(self.points) < 2:
            return None
        return self.points[1].valid_time - self.points[0].valid_time

    def times(self) -> list[datetime]:
        return [p.valid_time for p in self.points]

    def point_at(self, t: datetime) -> TrackPoint | None:
        return self._by_time.get(t)

    def position_at(self, t: datetime) -> GeoPoint | None:
        p = self._by_time.get(t)
        return p.center if p else None


def mean_track(storm_id: str, members: Sequence[Track]) -> Track:
    """Per-time spherical centroid over the members alive at each time.

    Intensity attributes are arithmetic means over the surviving members;
    the phase is the modal phase (ties resolve to tropical).
    """
    if not members:
        raise ValueError("mean track of zero members")
    times = max((m.times() for m in members), key=len)
    pts = []
    for t in times:
        alive = [m.point_at(t) for m in members]
        alive = [p for p in alive if p is not None]
        if not alive:
            break
        center = spherical_centroid([p.center for p in alive])
        phases = Counter(p.phase for p in alive)
        phase = TROPICAL if phases[TROPICAL] >= phases[EXTRATROPICAL] else EXTRATROPICAL
        pts.append(
            TrackPoint(
                valid_time=t,
                center=center,
                min_msl=sum(p.min_msl for p in alive) / len(alive),
                max_ws10m=sum(p.max_ws10m for p in alive) / len(alive),
                phase=phase,
            )
        )
    return Track(storm_id, MEAN_MEMBER, pts)


@dataclass
class EnsembleTrackSet:
    """Member tracks plus the ensemble-mean track for one initialization."""

    storm_id: str
    init_time: datetime
    members: list[Track]
    mean_track: Track = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not self.members:
            raise ValueError("ensemble needs at least one member")
        if self.mean_track is None:
            self.mean_track = mean_track(self.storm_id, self.members)

    @property
    def n_members(self) -> int:
        return len(self.members)

    def members_alive_at(self, t: datetime) -> list[TrackPoint]:
        pts = (m.point_at(t) for m in self.members)
        return [p for p in pts if p is not None]


def _format_float(x: float) -> str:
    return repr(float(x))


def write_track_csv(path: str | Path, tracks: Iterable[Track]) -> None:
    rows = ["storm_id,member_id,valid_time,lat,lon,min_msl_pa,max_ws10m_ms,phase"]
    for tr in tracks:
        for p in tr.points:
            rows.append(
                ",".join(
                    [
                        tr.storm_id,
                        str(tr.member_id),
                        p.valid_time.isoformat(),
                        _format_float(p.center.lat),
                        _format_float(p.center.lon),
                        _format_float(p.min_msl),
                        _format_float(p.max_ws10m),
                        p.phase,
                    ]
                )
            )
    atomic_write_text(path, "\n".join(rows) + "\n")


def _parse_member_id(s: str) -> MemberId:
    return s if s in (MEAN_MEMBER, OBS_MEMBER) else int(s)


def read_track_csv(path: str | Path) -> list[Track]:
    """Read tracks, grouping rows by (storm_id, member_id) in file order."""
    grouped: dict[tuple[str, str], list[TrackPoint]] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            pt = TrackPoint(
                valid_time=datetime.fromisoformat(row["valid_time"]),
                center=GeoPoint(float(row["lat"]), float(row["lon"])),
                min_msl=float(row["min_msl_pa"]),
                max_ws10m=float(row["max_ws10m_ms"]),
                phase=row["phase"],
            )
            grouped.setdefault((row["storm_id"], row["member_id"]), []).append(pt)
    return [
        Track(storm_id, _parse_member_id(member_id), pts)
        for (storm_id, member_id), pts in grouped.items()
    ]


def group_ensembles(tracks: Sequence[Track]) -> list[EnsembleTrackSet]:
    """Group member tracks by storm into ensembles (one init per storm).

    A provided MEAN track is used as-is; otherwise the mean is recomputed.
    OBS tracks are ignored here (they are observations, not forecasts).
    """
    by_storm: dict[str, dict[str, list[Track] | Track]] = {}
    for tr in tracks:
        slot = by_storm.setdefault(tr.storm_id, {"members": [], "mean": None})
        if tr.member_id == OBS_MEMBER:
            continue
        if tr.member_id == MEAN_MEMBER:
            slot["mean"] = tr
        else:
            slot["members"].append(tr)
    out = []
    for storm_id, slot in sorted(by_storm.items()):
        members: list[Track] = slot["members"]  # type: ignore[assignment]
        if not members:
            continue
        out.append(
            EnsembleTrackSet(
                storm_id=storm_id,
                init_time=members[0].init_time,
                members=sorted(members, key=lambda m: m.member_id),
                mean_track=slot["mean"],  # type: ignore[arg-type]
            )
        )
    return out


def observed_by_storm(tracks: Sequence[Track]) -> Mapping[str, Track]:
    return {tr.storm_id: tr for tr in tracks if tr.member_id == OBS_MEMBER}
