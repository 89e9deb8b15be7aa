"""Spherical-earth geodesy: distances, bearings, destinations, centroids.

All functions use a spherical earth of radius 6371.0 km (mean radius) and
work in degrees externally, radians internally. Latitudes are restricted
to [-90, 90]; longitudes are normalized to [-180, 180).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import AntipodalPoints, CoincidentPoints

EARTH_RADIUS_KM = 6371.0

# two points closer than this (degrees) are treated as coincident
_COINCIDENT_DEG = 1e-9


def normalize_lon(lon: float) -> float:
    """Map a longitude in degrees onto [-180, 180)."""
    lon = math.fmod(lon + 180.0, 360.0)
    if lon < 0.0:
        lon += 360.0
    return lon - 180.0


@dataclass(frozen=True)
class GeoPoint:
    """A position on the sphere, degrees, longitude normalized."""

    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        object.__setattr__(self, "lat", float(self.lat))
        object.__setattr__(self, "lon", normalize_lon(float(self.lon)))


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points in kilometers.

    Symmetric and nonnegative; uses the haversine form, which is
    well-conditioned for both small and near-antipodal separations.
    """
    return float(
        haversine_km_arrays(
            np.float64(a.lat), np.float64(a.lon), np.float64(b.lat), np.float64(b.lon)
        )
    )


def haversine_km_arrays(lat1, lon1, lat2, lon2):
    """Vectorized haversine distance (degrees in, km out)."""
    phi1 = np.deg2rad(lat1)
    phi2 = np.deg2rad(lat2)
    dphi = phi2 - phi1
    dlam = np.deg2rad(lon2) - np.deg2rad(lon1)
    h = np.sin(dphi / 2.0) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(dlam / 2.0) ** 2
    h = np.clip(h, 0.0, 1.0)
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(h))


def azimuth_deg(a: GeoPoint, b: GeoPoint) -> float:
    """Initial great-circle bearing from ``a`` to ``b`` in [0, 360).

    0 is due north, 90 due east. Raises :class:`CoincidentPoints` when the
    points coincide within 1e-9 degrees and :class:`AntipodalPoints` when
    they are antipodal; the bearing is undefined in both cases.
    """
    dlat = abs(a.lat - b.lat)
    dlon = abs(normalize_lon(a.lon - b.lon))
    if dlat < _COINCIDENT_DEG and dlon < _COINCIDENT_DEG:
        raise CoincidentPoints(f"{a} and {b} coincide")
    if abs(a.lat + b.lat) < _COINCIDENT_DEG and abs(dlon - 180.0) < _COINCIDENT_DEG:
        raise AntipodalPoints(f"{a} and {b} are antipodal")
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dlam = math.radians(b.lon - a.lon)
    y = math.sin(dlam) * math.cos(phi2)
    x = math.cos(phi1) * math.sin(phi2) - math.sin(phi1) * math.cos(phi2) * math.cos(dlam)
    return math.degrees(math.atan2(y, x)) % 360.0


def destination(p: GeoPoint, bearing_deg: float, distance_km: float) -> GeoPoint:
    """Point reached from ``p`` along the initial bearing for a distance."""
    if distance_km == 0.0:
        return p
    delta = distance_km / EARTH_RADIUS_KM
    theta = math.radians(bearing_deg)
    phi1 = math.radians(p.lat)
    lam1 = math.radians(p.lon)
    sphi2 = math.sin(phi1) * math.cos(delta) + math.cos(phi1) * math.sin(delta) * math.cos(theta)
    sphi2 = min(1.0, max(-1.0, sphi2))
    phi2 = math.asin(sphi2)
    lam2 = lam1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(phi1),
        math.cos(delta) - math.sin(phi1) * sphi2,
    )
    return GeoPoint(math.degrees(phi2), math.degrees(lam2))


def continuation_bearing(a: GeoPoint, b: GeoPoint) -> float:
    """Bearing at ``b`` of the great circle arriving from ``a``.

    This is the direction in which the a->b arc continues past b, i.e. the
    reverse azimuth plus 180 degrees.
    """
    return (azimuth_deg(b, a) + 180.0) % 360.0


def unit_vectors(lat_deg, lon_deg) -> np.ndarray:
    """Earth-centered unit vectors, shape (..., 3), from degree coordinates."""
    phi = np.deg2rad(np.asarray(lat_deg, dtype=np.float64))
    lam = np.deg2rad(np.asarray(lon_deg, dtype=np.float64))
    cphi = np.cos(phi)
    return np.stack([cphi * np.cos(lam), cphi * np.sin(lam), np.sin(phi)], axis=-1)


def from_unit_vector(v: np.ndarray) -> GeoPoint:
    """Inverse of :func:`unit_vectors` for a single 3-vector."""
    x, y, z = (float(c) for c in v)
    hyp = math.hypot(x, y)
    return GeoPoint(math.degrees(math.atan2(z, hyp)), math.degrees(math.atan2(y, x)))


def spherical_centroid(points) -> GeoPoint:
    """Centroid of points on the sphere: mean of unit vectors, renormalized."""
    pts = list(points)
    if not pts:
        raise ValueError("centroid of empty point set")
    v = unit_vectors([p.lat for p in pts], [p.lon for p in pts]).mean(axis=0)
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise ValueError("centroid undefined: points cancel out")
    return from_unit_vector(v / norm)


def displace_tangent(p: GeoPoint, east_km: float, north_km: float) -> GeoPoint:
    """Displace ``p`` by a local tangent-plane offset (km east, km north)."""
    dist = math.hypot(east_km, north_km)
    if dist == 0.0:
        return p
    bearing = math.degrees(math.atan2(east_km, north_km)) % 360.0
    return destination(p, bearing, dist)
