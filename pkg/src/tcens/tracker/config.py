"""Tracker parameters and thresholds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..gridcore.grid import SURFACE


@dataclass(frozen=True)
class TrackerConfig:
    """Knobs of the cyclone-center identification loop.

    Defaults: candidates are searched within 445 km of the first guess on a
    5x coarsened grid; validation checks 850 hPa |vorticity| >= 5e-5 1/s and,
    over land, 10 m wind speed > 8 m/s, both within 278 km; step-to-step
    displacement is capped at 3x the previous displacement (first step: the
    advection displacement, floored at 100 km). Steering winds average the
    850/500 hPa flow within 278 km of the current center, equal weights.
    """

    search_radius_km: float = 445.0
    criteria_radius_km: float = 278.0
    wind10m_threshold: float = 8.0
    vort_threshold: float = 5e-5
    coarsen_factor: int = 5
    max_displacement_factor: float = 3.0
    steering_levels: Mapping[str, float] = field(
        default_factory=lambda: {"850": 0.5, "500": 0.5}
    )
    steering_avg_radius_km: float = 278.0
    require_thickness_max_when_extratropical: bool = False
    step_hours: float = 6.0
    first_step_cap_floor_km: float = 100.0
    candidate_vorticity_level: str = SURFACE
    validation_vorticity_level: str = "850"
    thickness_levels: tuple[str, str] = ("850", "200")

    def __post_init__(self):
        for name in (
            "search_radius_km",
            "criteria_radius_km",
            "wind10m_threshold",
            "vort_threshold",
            "steering_avg_radius_km",
            "step_hours",
            "first_step_cap_floor_km",
            "max_displacement_factor",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.coarsen_factor < 2:
            raise ValueError("coarsen_factor must be >= 2")
        if not self.steering_levels:
            raise ValueError("steering_levels must not be empty")
        total = sum(self.steering_levels.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"steering weights must sum to 1, got {total}")
        object.__setattr__(self, "steering_levels", dict(self.steering_levels))

    @classmethod
    def from_mapping(cls, overrides: Mapping[str, object]) -> "TrackerConfig":
        """Build a config from e.g. a parsed CLI/JSON mapping."""
        kwargs = {}
        for f_name in cls.__dataclass_fields__:
            if f_name in overrides:
                kwargs[f_name] = overrides[f_name]
        if "steering_levels" in kwargs and isinstance(kwargs["steering_levels"], str):
            levels = {}
            for part in kwargs["steering_levels"].split(","):
                level, weight = part.split(":")
                levels[level.strip()] = float(weight)
            kwargs["steering_levels"] = levels
        return cls(**kwargs)
