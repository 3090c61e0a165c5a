"""Measures on polygons: area, perimeter, hull, bounding shapes, overlay.

These are the primitives every compactness formula is built from.  All
functions are pure and thread-safe.
"""

from typing import Sequence

import numpy as np

from faceartifacts.errors import DegenerateGeometry
from faceartifacts.geometry import clip
from faceartifacts.geometry.backend import kernels
from faceartifacts.geometry.types import (
    BoundingCircle,
    Point,
    PolygonGeom,
    Ring,
    RotatedRect,
)


def area(p: PolygonGeom) -> float:
    """Net area: shoelace of the exterior minus hole areas."""
    a = abs(kernels.ring_signed_area(p.exterior.xs, p.exterior.ys))
    for h in p.holes:
        a -= abs(kernels.ring_signed_area(h.xs, h.ys))
    if a <= 0.0:
        raise DegenerateGeometry("polygon area is not strictly positive")
    return a


def perimeter(p: PolygonGeom) -> float:
    """Sum of exterior and hole boundary lengths."""
    s = kernels.ring_perimeter(p.exterior.xs, p.exterior.ys)
    for h in p.holes:
        s += kernels.ring_perimeter(h.xs, h.ys)
    return s


def convex_hull(points: Sequence) -> Ring:
    """Counterclockwise convex hull ring of a point set."""
    pts = [(float(p[0]), float(p[1])) for p in points]
    if len(pts) < 3:
        raise DegenerateGeometry("need at least 3 points")
    xs = np.array([p[0] for p in pts], dtype=np.float64)
    ys = np.array([p[1] for p in pts], dtype=np.float64)
    try:
        hx, hy = kernels.convex_hull(xs, ys)
    except ValueError as exc:
        raise DegenerateGeometry(str(exc)) from None
    return Ring(list(zip(hx.tolist(), hy.tolist())))


def min_bounding_circle(p: PolygonGeom) -> BoundingCircle:
    """Smallest circle enclosing the exterior vertices.

    Holes cannot extend the circle so they are ignored.  Vertices are
    processed in ring order, which makes the result reproducible down to
    the last bit for identical input.
    """
    xs = p.exterior.xs[:-1]
    ys = p.exterior.ys[:-1]
    if len({(x, y) for x, y in zip(xs.tolist(), ys.tolist())}) < 3:
        raise DegenerateGeometry("need at least 3 distinct vertices")
    cx, cy, r = kernels.min_enclosing_circle(xs, ys)
    return BoundingCircle(center=Point(cx, cy), radius=r)


def min_rotated_rect(p: PolygonGeom) -> RotatedRect:
    """Minimum-area enclosing rectangle over all orientations.

    Rotating calipers on the convex hull of the exterior ring; area ties
    (square hulls) resolve to the smallest rotation angle in [0, pi/2).
    """
    try:
        hx, hy = kernels.convex_hull(p.exterior.xs[:-1], p.exterior.ys[:-1])
        width, length, corners = kernels.min_area_rect(hx, hy)
    except ValueError as exc:
        raise DegenerateGeometry(str(exc)) from None
    pts = tuple(Point(x, y) for x, y in corners)
    return RotatedRect(corners=pts, width=width, length=length)


def intersection_area(a: PolygonGeom, b: PolygonGeom) -> float:
    """Area of the boolean intersection; 0.0 when disjoint."""
    return clip.intersection_area(a, b)
