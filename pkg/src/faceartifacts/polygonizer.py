"""Street linework to face polygons.

Faces are the bounded minimal cycles of the noded planar graph: every
region enclosed from all sides by network edges.  Dangling edges and
bridges bound no region and vanish; the unbounded outer face is
discarded; a loop nested inside another face yields its own face
without punching a hole in the enclosing one.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from faceartifacts.errors import GeographicCoordinatesWarning, InvalidGeometry
from faceartifacts.geometry.types import PolygonGeom, Ring

# "same point" snap distance during noding: below surveying precision,
# above float noise.
SNAP_TOLERANCE = 1e-6
# faces smaller than this are numeric slivers, not geography
MIN_FACE_AREA = 1e-6

SHARED_ENDPOINTS = "shared-endpoints"
FULL_GEOMETRIC = "full-geometric"

Polyline = List[Tuple[float, float]]


def _quantize(x: float, y: float) -> Tuple[float, float]:
    return (round(x / SNAP_TOLERANCE) * SNAP_TOLERANCE,
            round(y / SNAP_TOLERANCE) * SNAP_TOLERANCE)


@dataclass
class EdgeSet:
    """A bag of polylines plus the noding interpretation to apply.

    ``shared-endpoints`` treats only shared vertices as intersections
    (OSM semantics: crossings without a common node are grade-separated);
    ``full-geometric`` also splits at every geometric crossing.
    """

    edges: List[Polyline]
    noding_mode: str = SHARED_ENDPOINTS
    noded: bool = False
    dropped_segments: int = 0

    def __post_init__(self):
        if self.noding_mode not in (SHARED_ENDPOINTS, FULL_GEOMETRIC):
            raise ValueError(f"unknown noding mode: {self.noding_mode!r}")
        cleaned: List[Polyline] = []
        dropped = 0
        for line in self.edges:
            pts = [_quantize(float(p[0]), float(p[1])) for p in line]
            dedup = [pts[0]] if pts else []
            for p in pts[1:]:
                if p != dedup[-1]:
                    dedup.append(p)
            if len(dedup) >= 2:
                cleaned.append(dedup)
            elif pts:
                dropped += 1
        self.edges = cleaned
        self.dropped_segments += dropped
        if cleaned:
            xs = [p[0] for line in cleaned for p in line]
            ys = [p[1] for line in cleaned for p in line]
            if (min(xs) >= -180.0 and max(xs) <= 180.0
                    and min(ys) >= -90.0 and max(ys) <= 90.0):
                warnings.warn(
                    "coordinates look geographic (degrees?); all measures "
                    "assume a projected plane in meters",
                    GeographicCoordinatesWarning,
                    stacklevel=2,
                )


@dataclass(frozen=True)
class FacePolygon:
    """One bounded face of the polygonized network (hole-free ring)."""

    id: int
    geometry: PolygonGeom

    @property
    def ring(self) -> Ring:
        return self.geometry.exterior


def node_edges(raw: EdgeSet) -> EdgeSet:
    """Split polylines so edges meet only at shared vertices.

    In full-geometric mode pairwise segment crossings (and T-junctions)
    become shared vertices first; in shared-endpoints mode geometric
    crossings without a common vertex survive untouched.
    """
    lines = [list(line) for line in raw.edges]
    if raw.noding_mode == FULL_GEOMETRIC:
        lines = _insert_geometric_crossings(lines)

    counts: Dict[Tuple[float, float], int] = {}
    for line in lines:
        for p in line:
            counts[p] = counts.get(p, 0) + 1

    out: List[Polyline] = []
    for line in lines:
        start = 0
        for i in range(1, len(line) - 1):
            if counts[line[i]] >= 2:
                out.append(line[start:i + 1])
                start = i
        out.append(line[start:])
    return EdgeSet(
        edges=out,
        noding_mode=raw.noding_mode,
        noded=True,
        dropped_segments=raw.dropped_segments,
    )


def _insert_geometric_crossings(lines: List[Polyline]) -> List[Polyline]:
    """Add a vertex at every proper crossing or T-junction between segments."""
    segs = []  # (line index, segment index, p1, p2)
    for li, line in enumerate(lines):
        for si in range(len(line) - 1):
            segs.append((li, si, line[si], line[si + 1]))

    cell = _grid_cell_size(segs)
    buckets: Dict[Tuple[int, int], List[int]] = {}
    for k, (_, _, p1, p2) in enumerate(segs):
        for key in _bbox_cells(p1, p2, cell):
            buckets.setdefault(key, []).append(k)

    splits: Dict[Tuple[int, int], List[Tuple[float, Tuple[float, float]]]] = {}
    seen = set()
    for bucket in buckets.values():
        for a in range(len(bucket)):
            for b in range(a + 1, len(bucket)):
                i, j = bucket[a], bucket[b]
                if (i, j) in seen:
                    continue
                seen.add((i, j))
                li, si, p1, p2 = segs[i]
                lj, sj, q1, q2 = segs[j]
                if li == lj and abs(si - sj) <= 1:
                    continue  # consecutive segments share a vertex by design
                for t_i, t_j, pt in _segment_crossings(p1, p2, q1, q2):
                    qpt = _quantize(*pt)
                    if 0.0 < t_i < 1.0 and qpt != p1 and qpt != p2:
                        splits.setdefault((li, si), []).append((t_i, qpt))
                    if 0.0 < t_j < 1.0 and qpt != q1 and qpt != q2:
                        splits.setdefault((lj, sj), []).append((t_j, qpt))

    out = []
    for li, line in enumerate(lines):
        new_line = [line[0]]
        for si in range(len(line) - 1):
            for _, pt in sorted(set(splits.get((li, si), ()))):
                if pt != new_line[-1]:
                    new_line.append(pt)
            if line[si + 1] != new_line[-1]:
                new_line.append(line[si + 1])
        if len(new_line) >= 2:
            out.append(new_line)
    return out


def _grid_cell_size(segs) -> float:
    lengths = sorted(
        math.hypot(p2[0] - p1[0], p2[1] - p1[1]) for _, _, p1, p2 in segs
    )
    if not lengths:
        return 1.0
    med = lengths[len(lengths) // 2]
    return max(med, SNAP_TOLERANCE * 10)


def _bbox_cells(p1, p2, cell):
    x0, x1 = sorted((p1[0], p2[0]))
    y0, y1 = sorted((p1[1], p2[1]))
    for ix in range(int(math.floor(x0 / cell)), int(math.floor(x1 / cell)) + 1):
        for iy in range(int(math.floor(y0 / cell)), int(math.floor(y1 / cell)) + 1):
            yield (ix, iy)


def _segment_crossings(p1, p2, q1, q2):
    """Interior intersection points between two segments.

    Yields (t_p, t_q, point) tuples; endpoint-to-endpoint contacts are
    already shared vertices and are skipped.  Collinear overlaps yield
    the projections of interior endpoints.
    """
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = q2[0] - q1[0], q2[1] - q1[1]
    denom = rx * sy - ry * sx
    qpx, qpy = q1[0] - p1[0], q1[1] - p1[1]
    results = []
    if denom != 0.0:
        t = (qpx * sy - qpy * sx) / denom
        u = (qpx * ry - qpy * rx) / denom
        if -1e-12 <= t <= 1 + 1e-12 and -1e-12 <= u <= 1 + 1e-12:
            pt = (p1[0] + t * rx, p1[1] + t * ry)
            results.append((t, u, pt))
        return results
    # parallel: check collinearity, then project endpoints
    if qpx * ry - qpy * rx != 0.0:
        return results
    rr = rx * rx + ry * ry
    if rr == 0.0:
        return results
    for q in (q1, q2):
        t = ((q[0] - p1[0]) * rx + (q[1] - p1[1]) * ry) / rr
        if 1e-12 < t < 1 - 1e-12:
            results.append((t, 0.0, q))
    ss = sx * sx + sy * sy
    for p in (p1, p2):
        u = ((p[0] - q1[0]) * sx + (p[1] - q1[1]) * sy) / ss
        if 1e-12 < u < 1 - 1e-12:
            results.append((0.0, u, p))
    return results


def polygonize(noded: EdgeSet, stats: Optional[dict] = None) -> List[FacePolygon]:
    """Extract the bounded faces of the noded planar graph.

    Auto-nodes the input if ``noded.noded`` is false.  Output is
    deterministic and independent of input edge order: faces are sorted
    by (min-x, min-y, area) before ids are assigned.
    """
    if not noded.noded:
        noded = node_edges(noded)

    edges = _dedupe_edges(noded.edges)
    if stats is not None:
        stats["input_edges"] = len(noded.edges)
        stats["deduplicated_edges"] = len(noded.edges) - len(edges)
        stats["dropped_segments"] = noded.dropped_segments

    edges = _prune_dangles(edges)

    rings = _trace_rings(edges)
    faces: List[Tuple[Tuple[float, float, float], Ring]] = []
    slivers = 0
    for pts, signed_area in rings:
        if signed_area <= 0.0:
            continue
        if signed_area < MIN_FACE_AREA:
            slivers += 1
            continue
        ring = Ring(pts)
        bx0, by0, _, _ = ring.bbox()
        faces.append(((bx0, by0, signed_area), ring))
    if stats is not None:
        stats["sliver_faces_dropped"] = slivers
    faces.sort(key=lambda item: item[0])
    return [
        FacePolygon(id=i, geometry=PolygonGeom(ring))
        for i, (_, ring) in enumerate(faces)
    ]


def _dedupe_edges(lines: Sequence[Polyline]) -> List[Polyline]:
    seen = set()
    out = []
    for line in lines:
        fwd = tuple(line)
        key = min(fwd, fwd[::-1])
        if key in seen:
            continue
        seen.add(key)
        out.append(list(line))
    return out


def _prune_dangles(lines: List[Polyline]) -> List[Polyline]:
    lines = list(lines)
    while True:
        degree: Dict[Tuple[float, float], int] = {}
        for line in lines:
            for p in (line[0], line[-1]):
                degree[p] = degree.get(p, 0) + 1
        keep = [
            line for line in lines
            if degree[line[0]] >= 2 and degree[line[-1]] >= 2
        ]
        if len(keep) == len(lines):
            return keep
        lines = keep


def _shoelace(pts: Sequence[Tuple[float, float]]) -> float:
    s = 0.0
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i - 1]
        x2, y2 = pts[i]
        s += x1 * y2 - x2 * y1
    return 0.5 * s


def _trace_rings(lines: List[Polyline]):
    """Walk half-edges by the angular-next rule and split minimal cycles.

    Returns (ring point list, signed area) per minimal cycle; bounded
    faces come out counterclockwise (positive area).  Spur and bridge
    back-and-forth cycles enclose nothing and net out near zero.
    """
    n_edges = len(lines)
    if n_edges == 0:
        return []

    origin = [None] * (2 * n_edges)
    head = [None] * (2 * n_edges)
    for e, line in enumerate(lines):
        origin[2 * e] = line[0]
        head[2 * e] = line[-1]
        origin[2 * e + 1] = line[-1]
        head[2 * e + 1] = line[0]

    def _pts(h: int) -> Polyline:
        line = lines[h // 2]
        return line if h % 2 == 0 else line[::-1]

    rotations: Dict[Tuple[float, float], List[int]] = {}
    for h in range(2 * n_edges):
        rotations.setdefault(origin[h], []).append(h)

    position: Dict[int, int] = {}
    for node, hs in rotations.items():
        def _key(h: int):
            pts = _pts(h)
            dx = pts[1][0] - pts[0][0]
            dy = pts[1][1] - pts[0][1]
            return (math.atan2(dy, dx), tuple(pts))

        hs.sort(key=_key)
        for i, h in enumerate(hs):
            position[h] = i

    def _next(h: int) -> int:
        # step to the clockwise neighbor of the reversed incoming edge,
        # which walks bounded faces counterclockwise
        rot = rotations[head[h]]
        twin = h ^ 1
        return rot[(position[twin] - 1) % len(rot)]

    visited = [False] * (2 * n_edges)
    rings = []
    for h0 in range(2 * n_edges):
        if visited[h0]:
            continue
        walk = []
        h = h0
        while True:
            visited[h] = True
            walk.append(h)
            h = _next(h)
            if h == h0:
                break
            if visited[h]:
                raise InvalidGeometry("half-edge walk re-entered a used edge")
        for cyc in _minimal_cycles(walk, origin, head):
            pts: Polyline = []
            for he in cyc:
                pts.extend(_pts(he)[:-1])
            if len(pts) < 3:
                continue
            rings.append((pts, _shoelace(pts)))
    return rings


def _minimal_cycles(walk: List[int], origin, head) -> List[List[int]]:
    cycles = []
    start = origin[walk[0]]
    node_stack = [start]
    pos = {start: 0}
    he_stack: List[int] = []
    for he in walk:
        he_stack.append(he)
        node = head[he]
        if node in pos:
            p = pos[node]
            cycles.append(he_stack[p:])
            for n in node_stack[p + 1:]:
                pos.pop(n, None)
            del node_stack[p + 1:]
            del he_stack[p:]
        else:
            node_stack.append(node)
            pos[node] = len(he_stack)
    return cycles


def face_areas_summary(faces: Sequence[FacePolygon]) -> dict:
    """Descriptive statistics for run reports."""
    areas = [abs(f.ring.signed_area) for f in faces]
    summary = {"count": len(areas), "total_area": float(sum(areas))}
    if areas:
        summary["mean_area"] = summary["total_area"] / len(areas)
    return summary
