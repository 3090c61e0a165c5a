"""Clip an edge set to a study-area polygon.

Segments are split where they cross the boundary and sub-segments whose
midpoint falls outside are dropped.  Used when the analysis area is a
city boundary rather than the raw download bbox.
"""

from typing import List, Tuple

from faceartifacts.geometry.types import PolygonGeom, point_in_ring
from faceartifacts.polygonizer import EdgeSet, Polyline


def _ring_crossings(p1, p2, ring) -> List[float]:
    """Parameters t in (0,1) where segment p1->p2 crosses ring edges."""
    ts = []
    xs = ring.xs.tolist()
    ys = ring.ys.tolist()
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    for i in range(len(xs) - 1):
        sx, sy = xs[i + 1] - xs[i], ys[i + 1] - ys[i]
        denom = rx * sy - ry * sx
        if denom == 0.0:
            continue
        qpx, qpy = xs[i] - p1[0], ys[i] - p1[1]
        t = (qpx * sy - qpy * sx) / denom
        u = (qpx * ry - qpy * rx) / denom
        if 1e-12 < t < 1 - 1e-12 and -1e-12 <= u <= 1 + 1e-12:
            ts.append(t)
    return sorted(ts)


def _inside(p, clip: PolygonGeom) -> bool:
    if not point_in_ring(p[0], p[1], clip.exterior):
        return False
    return not any(point_in_ring(p[0], p[1], h) for h in clip.holes)


def clip_edge_set(es: EdgeSet, clip: PolygonGeom) -> EdgeSet:
    """Keep only the linework inside the clip polygon."""
    rings = [clip.exterior, *clip.holes]
    out: List[Polyline] = []
    for line in es.edges:
        current: List[Tuple[float, float]] = []
        for i in range(len(line) - 1):
            p1, p2 = line[i], line[i + 1]
            ts = [0.0]
            for ring in rings:
                ts.extend(_ring_crossings(p1, p2, ring))
            ts.append(1.0)
            ts = sorted(set(ts))
            for a, b in zip(ts[:-1], ts[1:]):
                qa = (p1[0] + a * (p2[0] - p1[0]), p1[1] + a * (p2[1] - p1[1]))
                qb = (p1[0] + b * (p2[0] - p1[0]), p1[1] + b * (p2[1] - p1[1]))
                mid = ((qa[0] + qb[0]) / 2.0, (qa[1] + qb[1]) / 2.0)
                if _inside(mid, clip):
                    if current and current[-1] == qa:
                        current.append(qb)
                    else:
                        if len(current) >= 2:
                            out.append(current)
                        current = [qa, qb]
                else:
                    if len(current) >= 2:
                        out.append(current)
                    current = []
        if len(current) >= 2:
            out.append(current)
    return EdgeSet(edges=out, noding_mode=es.noding_mode)
