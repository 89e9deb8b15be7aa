"""Cyclone tracking: configuration, track containers, tracking loop."""

from .algorithm import (
    advection_guess,
    constrain_displacement,
    find_candidates,
    first_guess,
    steering_wind,
    track_ensemble,
    track_member,
    validate_candidate,
)
from .config import TrackerConfig
from .track import (
    EXTRATROPICAL,
    MEAN_MEMBER,
    OBS_MEMBER,
    TROPICAL,
    EnsembleTrackSet,
    Track,
    TrackPoint,
    group_ensembles,
    mean_track,
    observed_by_storm,
    read_track_csv,
    write_track_csv,
)

__all__ = [
    "EXTRATROPICAL",
    "MEAN_MEMBER",
    "OBS_MEMBER",
    "TROPICAL",
    "EnsembleTrackSet",
    "Track",
    "TrackPoint",
    "TrackerConfig",
    "advection_guess",
    "constrain_displacement",
    "find_candidates",
    "first_guess",
    "group_ensembles",
    "mean_track",
    "observed_by_storm",
    "read_track_csv",
    "steering_wind",
    "track_ensemble",
    "track_member",
    "validate_candidate",
    "write_track_csv",
]
