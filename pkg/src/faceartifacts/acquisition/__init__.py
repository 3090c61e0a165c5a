"""Data ingestion: Overpass client, GeoJSON files, local projection."""

from faceartifacts.acquisition.clipping import clip_edge_set
from faceartifacts.acquisition.geojson_io import (
    edge_set_to_geojson,
    faces_to_geojson,
    read_faces,
    read_geojson,
    read_labeled_faces,
    write_json,
)
from faceartifacts.acquisition.overpass import (
    DEFAULT_ENDPOINT,
    DEFAULT_HIGHWAY_CLASSES,
    ENDPOINT_ENV_VAR,
    NetworkQuery,
    RawOsmGraph,
    build_overpass_query,
    fetch,
    parse_overpass_json,
    to_edge_set,
)
from faceartifacts.acquisition.projection import (
    TransverseMercator,
    describe,
    utm_zone_for,
)

__all__ = [
    "DEFAULT_ENDPOINT",
    "DEFAULT_HIGHWAY_CLASSES",
    "ENDPOINT_ENV_VAR",
    "NetworkQuery",
    "RawOsmGraph",
    "TransverseMercator",
    "build_overpass_query",
    "clip_edge_set",
    "describe",
    "edge_set_to_geojson",
    "faces_to_geojson",
    "fetch",
    "parse_overpass_json",
    "read_faces",
    "read_geojson",
    "read_labeled_faces",
    "to_edge_set",
    "utm_zone_for",
    "write_json",
]
