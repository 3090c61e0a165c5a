"""Polygon-polygon intersection area.

Strategy: ear-clip both rings into triangles, clip every triangle pair
(Sutherland-Hodgman against a convex clipper), and sum the clipped
areas.  Triangulations partition each ring, so the pairwise sum equals
the intersection area exactly up to float rounding; no general boolean
overlay with its degeneracy zoo is needed.  Holes enter through
inclusion-exclusion.
"""

import math
from typing import List, Tuple

from faceartifacts.errors import InvalidGeometry
from faceartifacts.geometry.types import PolygonGeom, Ring

Triangle = Tuple[float, float, float, float, float, float]


def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _dedupe_ring(xs, ys):
    """Open CCW vertex list with duplicates and collinear runs removed."""
    pts = list(zip(xs.tolist(), ys.tolist()))[:-1]
    out = []
    for p in pts:
        if out and p == out[-1]:
            continue
        out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    # collinear removal, tolerance relative to the ring extent
    span = max(
        max(p[0] for p in out) - min(p[0] for p in out),
        max(p[1] for p in out) - min(p[1] for p in out),
    )
    tol = 1e-12 * span * span
    changed = True
    while changed and len(out) > 3:
        changed = False
        i = 0
        while i < len(out) and len(out) > 3:
            a = out[i - 1]
            b = out[i]
            c = out[(i + 1) % len(out)]
            if abs(_cross(a[0], a[1], b[0], b[1], c[0], c[1])) <= tol:
                out.pop(i)
                changed = True
            else:
                i += 1
    return out


def triangulate(ring: Ring) -> List[Triangle]:
    """Ear-clipping triangulation of a simple ring."""
    xs, ys = ring.xs, ring.ys
    if ring.signed_area < 0.0:
        xs, ys = xs[::-1], ys[::-1]
    pts = _dedupe_ring(xs, ys)
    n = len(pts)
    if n < 3:
        return []
    if n == 3:
        return [(pts[0][0], pts[0][1], pts[1][0], pts[1][1], pts[2][0], pts[2][1])]

    tris: List[Triangle] = []
    idx = list(range(n))
    guard = 0
    while len(idx) > 3 and guard < n * n:
        guard += 1
        clipped = False
        m = len(idx)
        for k in range(m):
            ia, ib, ic = idx[k - 1], idx[k], idx[(k + 1) % m]
            ax, ay = pts[ia]
            bx, by = pts[ib]
            cx, cy = pts[ic]
            if _cross(ax, ay, bx, by, cx, cy) <= 0.0:
                continue  # reflex corner, not an ear
            if _any_point_in_triangle(pts, idx, ia, ib, ic, ax, ay, bx, by, cx, cy):
                continue
            tris.append((ax, ay, bx, by, cx, cy))
            idx.pop(k)
            clipped = True
            break
        if not clipped:
            # Numeric stalemate: clip the most convex remaining corner.
            best_k, best_cr = -1, -math.inf
            m = len(idx)
            for k in range(m):
                ia, ib, ic = idx[k - 1], idx[k], idx[(k + 1) % m]
                cr = _cross(pts[ia][0], pts[ia][1], pts[ib][0], pts[ib][1],
                            pts[ic][0], pts[ic][1])
                if cr > best_cr:
                    best_k, best_cr = k, cr
            ia, ib, ic = idx[best_k - 1], idx[best_k], idx[(best_k + 1) % len(idx)]
            tris.append((pts[ia][0], pts[ia][1], pts[ib][0], pts[ib][1],
                         pts[ic][0], pts[ic][1]))
            idx.pop(best_k)
    ia, ib, ic = idx[0], idx[1], idx[2]
    tris.append((pts[ia][0], pts[ia][1], pts[ib][0], pts[ib][1],
                 pts[ic][0], pts[ic][1]))
    return tris


def _any_point_in_triangle(pts, idx, ia, ib, ic, ax, ay, bx, by, cx, cy):
    for j in idx:
        if j in (ia, ib, ic):
            continue
        px, py = pts[j]
        if (
            _cross(ax, ay, bx, by, px, py) >= 0.0
            and _cross(bx, by, cx, cy, px, py) >= 0.0
            and _cross(cx, cy, ax, ay, px, py) >= 0.0
        ):
            return True
    return False


def _clip_area(subject, clip_tri):
    """Area of subject polygon clipped by a CCW convex triangle."""
    out = subject
    cn = len(clip_tri)
    for e in range(cn):
        ax, ay = clip_tri[e]
        bx, by = clip_tri[(e + 1) % cn]
        inp = out
        out = []
        if not inp:
            return 0.0
        m = len(inp)
        for i in range(m):
            px, py = inp[i - 1]
            qx, qy = inp[i]
            p_in = _cross(ax, ay, bx, by, px, py) >= 0.0
            q_in = _cross(ax, ay, bx, by, qx, qy) >= 0.0
            if q_in:
                if not p_in:
                    out.append(_line_cross(ax, ay, bx, by, px, py, qx, qy))
                out.append((qx, qy))
            elif p_in:
                out.append(_line_cross(ax, ay, bx, by, px, py, qx, qy))
    if len(out) < 3:
        return 0.0
    s = 0.0
    m = len(out)
    for i in range(m):
        x1, y1 = out[i - 1]
        x2, y2 = out[i]
        s += x1 * y2 - x2 * y1
    return max(0.0, 0.5 * s)


def _line_cross(ax, ay, bx, by, px, py, qx, qy):
    d1 = _cross(ax, ay, bx, by, px, py)
    d2 = _cross(ax, ay, bx, by, qx, qy)
    t = d1 / (d1 - d2)
    return (px + t * (qx - px), py + t * (qy - py))


def _tri_bbox(t):
    return (
        min(t[0], t[2], t[4]),
        min(t[1], t[3], t[5]),
        max(t[0], t[2], t[4]),
        max(t[1], t[3], t[5]),
    )


def ring_intersection_area(a: Ring, b: Ring) -> float:
    """Intersection area of two simple rings."""
    ab = a.bbox()
    bb = b.bbox()
    if ab[2] < bb[0] or bb[2] < ab[0] or ab[3] < bb[1] or bb[3] < ab[1]:
        return 0.0
    tris_a = [(t, _tri_bbox(t)) for t in triangulate(a)]
    tris_b = [(t, _tri_bbox(t)) for t in triangulate(b)]
    total = 0.0
    for ta, ba in tris_a:
        sa = ((ta[0], ta[1]), (ta[2], ta[3]), (ta[4], ta[5]))
        for tb, bb2 in tris_b:
            if ba[2] < bb2[0] or bb2[2] < ba[0] or ba[3] < bb2[1] or bb2[3] < ba[1]:
                continue
            total += _clip_area(sa, ((tb[0], tb[1]), (tb[2], tb[3]), (tb[4], tb[5])))
    return total


def intersection_area(a: PolygonGeom, b: PolygonGeom) -> float:
    """Boolean intersection area of two polygons (holes respected)."""
    for ring in (a.exterior, *a.holes, b.exterior, *b.holes):
        if not ring.is_simple():
            raise InvalidGeometry("self-intersecting ring")
    # fix the evaluation order so the operation is exactly commutative
    ka = (a.bbox(), a.exterior.n_vertices, len(a.holes))
    kb = (b.bbox(), b.exterior.n_vertices, len(b.holes))
    if kb < ka:
        a, b = b, a
    total = ring_intersection_area(a.exterior, b.exterior)
    for hb in b.holes:
        total -= ring_intersection_area(a.exterior, hb)
    for ha in a.holes:
        total -= ring_intersection_area(ha, b.exterior)
    for ha in a.holes:
        for hb in b.holes:
            total += ring_intersection_area(ha, hb)
    return max(0.0, total)
