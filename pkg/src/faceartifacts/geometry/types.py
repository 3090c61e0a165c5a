"""Planar geometry value types.

Coordinates are x/y meters in a caller-supplied projected plane; nothing
here reprojects.  Rings store their (closed) coordinate arrays as
float64 so the kernels can consume them directly.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from faceartifacts.errors import DegenerateGeometry, InvalidGeometry
from faceartifacts.geometry.backend import kernels


class Point(NamedTuple):
    x: float
    y: float


class Ring:
    """Closed simple ring of vertices (first == last).

    The constructor closes an open coordinate sequence, checks finiteness
    and nonzero area, and rejects rings with fewer than 3 distinct
    vertices.  Full self-intersection testing is O(n^2) and therefore
    lazy: ``is_simple`` computes and caches it on demand.
    """

    __slots__ = ("xs", "ys", "_simple", "_signed_area")

    def __init__(self, coords):
        if isinstance(coords, Ring):
            xs, ys = coords.xs, coords.ys
        else:
            arr = np.asarray(
                [(float(p[0]), float(p[1])) for p in coords], dtype=np.float64
            )
            if arr.ndim != 2 or arr.shape[0] < 3:
                raise InvalidGeometry("ring needs at least 3 vertices")
            if arr[0, 0] != arr[-1, 0] or arr[0, 1] != arr[-1, 1]:
                arr = np.vstack([arr, arr[:1]])
            xs = np.ascontiguousarray(arr[:, 0])
            ys = np.ascontiguousarray(arr[:, 1])
        if xs.shape[0] < 4:
            raise InvalidGeometry("closed ring needs >= 4 points including closure")
        if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
            raise InvalidGeometry("ring has non-finite coordinates")
        self.xs = xs
        self.ys = ys
        self._signed_area = kernels.ring_signed_area(xs, ys)
        if self._signed_area == 0.0:
            raise DegenerateGeometry("ring has zero area")
        self._simple = None

    @property
    def n_vertices(self) -> int:
        """Vertex count excluding the closing repeat."""
        return self.xs.shape[0] - 1

    @property
    def points(self) -> Tuple[Point, ...]:
        return tuple(Point(x, y) for x, y in zip(self.xs.tolist(), self.ys.tolist()))

    @property
    def signed_area(self) -> float:
        return self._signed_area

    @property
    def is_ccw(self) -> bool:
        return self._signed_area > 0.0

    def bbox(self):
        return (
            float(self.xs.min()),
            float(self.ys.min()),
            float(self.xs.max()),
            float(self.ys.max()),
        )

    def reversed(self) -> "Ring":
        return Ring(list(zip(self.xs[::-1].tolist(), self.ys[::-1].tolist())))

    def is_simple(self) -> bool:
        """True when no two non-adjacent edges intersect."""
        if self._simple is None:
            self._simple = _ring_is_simple(self.xs, self.ys)
        return self._simple

    def __repr__(self):
        return f"Ring({self.n_vertices} vertices, area={self._signed_area:.6g})"


def _segments_intersect(ax, ay, bx, by, cx, cy, dx, dy) -> bool:
    """Proper or improper intersection of segments ab and cd."""
    d1 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    d2 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
    d3 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
    d4 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != d2 and d3 != d4:
        return True

    def on_seg(px, py, qx, qy, rx, ry):
        return (
            min(px, qx) <= rx <= max(px, qx)
            and min(py, qy) <= ry <= max(py, qy)
        )

    if d1 == 0 and on_seg(ax, ay, bx, by, cx, cy):
        return True
    if d2 == 0 and on_seg(ax, ay, bx, by, dx, dy):
        return True
    if d3 == 0 and on_seg(cx, cy, dx, dy, ax, ay):
        return True
    if d4 == 0 and on_seg(cx, cy, dx, dy, bx, by):
        return True
    return False


def _ring_is_simple(xs, ys) -> bool:
    x = xs.tolist()
    y = ys.tolist()
    n = len(x) - 1  # segment count
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                continue
            if _segments_intersect(
                x[i], y[i], x[i + 1], y[i + 1], x[j], y[j], x[j + 1], y[j + 1]
            ):
                return False
    return True


def point_in_ring(px: float, py: float, ring: Ring) -> bool:
    """Even-odd ray cast; boundary points count as inside."""
    xs = ring.xs
    ys = ring.ys
    inside = False
    n = xs.shape[0] - 1
    x = xs.tolist()
    y = ys.tolist()
    for i in range(n):
        x1, y1, x2, y2 = x[i], y[i], x[i + 1], y[i + 1]
        # boundary hit
        cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
        if (
            cross == 0.0
            and min(x1, x2) <= px <= max(x1, x2)
            and min(y1, y2) <= py <= max(y1, y2)
        ):
            return True
        if (y1 > py) != (y2 > py):
            xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xint:
                inside = not inside
    return inside


class PolygonGeom:
    """Simple polygon: exterior ring plus optional hole rings."""

    __slots__ = ("exterior", "holes")

    def __init__(self, exterior, holes: Sequence = ()):
        self.exterior = exterior if isinstance(exterior, Ring) else Ring(exterior)
        self.holes = tuple(h if isinstance(h, Ring) else Ring(h) for h in holes)
        ext_area = abs(self.exterior.signed_area)
        hole_area = 0.0
        for h in self.holes:
            if not point_in_ring(h.xs[0], h.ys[0], self.exterior):
                raise InvalidGeometry("hole lies outside the exterior ring")
            hole_area += abs(h.signed_area)
        if ext_area - hole_area <= 0.0:
            raise DegenerateGeometry("polygon has non-positive net area")

    def bbox(self):
        return self.exterior.bbox()

    def __repr__(self):
        return (
            f"PolygonGeom(exterior={self.exterior.n_vertices} vertices, "
            f"holes={len(self.holes)})"
        )


@dataclass(frozen=True)
class BoundingCircle:
    center: Point
    radius: float

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius


@dataclass(frozen=True)
class RotatedRect:
    corners: Tuple[Point, Point, Point, Point]
    width: float
    length: float

    @property
    def area(self) -> float:
        return self.width * self.length
