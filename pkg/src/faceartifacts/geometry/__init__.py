"""Planar geometric primitives and measures."""

from faceartifacts.geometry.backend import active_backend
from faceartifacts.geometry.ops import (
    area,
    convex_hull,
    intersection_area,
    min_bounding_circle,
    min_rotated_rect,
    perimeter,
)
from faceartifacts.geometry.types import (
    BoundingCircle,
    Point,
    PolygonGeom,
    Ring,
    RotatedRect,
    point_in_ring,
)

__all__ = [
    "BoundingCircle",
    "Point",
    "PolygonGeom",
    "Ring",
    "RotatedRect",
    "active_backend",
    "area",
    "convex_hull",
    "intersection_area",
    "min_bounding_circle",
    "min_rotated_rect",
    "perimeter",
    "point_in_ring",
]
