"""Raster data model, geodesy and neighborhood queries."""

from .geodesy import (
    EARTH_RADIUS_KM,
    GeoPoint,
    azimuth_deg,
    continuation_bearing,
    destination,
    displace_tangent,
    haversine_km,
    haversine_km_arrays,
    spherical_centroid,
)
from .grid import SURFACE, Field, FieldSet, GridSpec, require_same_spec
from .gsf import (
    load_member_run,
    read_gsf,
    read_run_manifest,
    validate_run_manifest,
    write_gsf,
    write_run_manifest,
)
from .neighborhood import local_extrema, neighborhood_extreme
from .raster import area_mean, downsample, relative_vorticity, upsample

__all__ = [
    "EARTH_RADIUS_KM",
    "SURFACE",
    "Field",
    "FieldSet",
    "GeoPoint",
    "GridSpec",
    "area_mean",
    "azimuth_deg",
    "continuation_bearing",
    "destination",
    "displace_tangent",
    "downsample",
    "haversine_km",
    "haversine_km_arrays",
    "load_member_run",
    "local_extrema",
    "neighborhood_extreme",
    "read_gsf",
    "read_run_manifest",
    "relative_vorticity",
    "require_same_spec",
    "spherical_centroid",
    "upsample",
    "validate_run_manifest",
    "write_gsf",
    "write_run_manifest",
]
