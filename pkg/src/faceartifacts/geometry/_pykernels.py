"""Pure-Python geometry kernels.

Fallback twin of the compiled ``_ckernels`` extension: same function
signatures, same algorithms, same tolerances, so results agree to float
noise whichever backend is active.  Coordinate arrays are float64 and
ring arrays are closed (first vertex repeated at the end).
"""

import math

import numpy as np

# Point-in-circle slack for the enclosing-circle search; multiplicative so
# the test is scale-free.
_CIRCLE_EPS = 1.0 + 1e-14


def ring_signed_area(xs, ys):
    """Shoelace signed area of a closed ring (positive when CCW)."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    return 0.5 * float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


def ring_perimeter(xs, ys):
    """Total boundary length of a closed ring."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    return float(np.sum(np.hypot(np.diff(x), np.diff(y))))


def convex_hull(xs, ys):
    """Convex hull of a point set by Andrew's monotone chain.

    Returns (hxs, hys) as float64 arrays, counterclockwise, first vertex
    not repeated, collinear boundary points dropped.  Raises ValueError
    when all points are collinear (or fewer than 3 are distinct).
    """
    pts = sorted(set(zip(np.asarray(xs, dtype=np.float64).tolist(),
                         np.asarray(ys, dtype=np.float64).tolist())))
    if len(pts) < 3:
        raise ValueError("convex hull needs 3 non-collinear points")

    def _build(seq):
        chain = []
        for px, py in seq:
            while len(chain) >= 2:
                ax, ay = chain[-2]
                bx, by = chain[-1]
                if (bx - ax) * (py - ay) - (by - ay) * (px - ax) <= 0.0:
                    chain.pop()
                else:
                    break
            chain.append((px, py))
        return chain

    lower = _build(pts)
    upper = _build(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise ValueError("all points are collinear")
    hx = np.array([p[0] for p in hull], dtype=np.float64)
    hy = np.array([p[1] for p in hull], dtype=np.float64)
    return hx, hy


def _circle_from_two(ax, ay, bx, by):
    cx = (ax + bx) / 2.0
    cy = (ay + by) / 2.0
    r = max(math.hypot(cx - ax, cy - ay), math.hypot(cx - bx, cy - by))
    return cx, cy, r


def _circumcircle(ax, ay, bx, by, cx, cy):
    # Translated to the bbox midpoint first for numerical stability.
    ox = (min(ax, bx, cx) + max(ax, bx, cx)) / 2.0
    oy = (min(ay, by, cy) + max(ay, by, cy)) / 2.0
    ax -= ox
    ay -= oy
    bx -= ox
    by -= oy
    cx -= ox
    cy -= oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    ux = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
               + (cx * cx + cy * cy) * (ay - by)) / d
    uy = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
               + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(math.hypot(ux - (ax + ox), uy - (ay + oy)),
            math.hypot(ux - (bx + ox), uy - (by + oy)),
            math.hypot(ux - (cx + ox), uy - (cy + oy)))
    return ux, uy, r


def _in_circle(cx, cy, r, px, py):
    return math.hypot(px - cx, py - cy) <= r * _CIRCLE_EPS


def min_enclosing_circle(xs, ys):
    """Smallest circle enclosing a point set.

    Incremental Welzl-style construction processing points strictly in
    input order (no shuffling) so repeated runs are bit-identical.
    """
    px = np.asarray(xs, dtype=np.float64).tolist()
    py = np.asarray(ys, dtype=np.float64).tolist()
    n = len(px)
    if n == 0:
        raise ValueError("empty point set")
    cx, cy, r = px[0], py[0], 0.0
    for i in range(1, n):
        if _in_circle(cx, cy, r, px[i], py[i]):
            continue
        # px[i] must lie on the boundary of the new circle.
        cx, cy, r = px[i], py[i], 0.0
        for j in range(i):
            if _in_circle(cx, cy, r, px[j], py[j]):
                continue
            if r == 0.0:
                cx, cy, r = _circle_from_two(px[i], py[i], px[j], py[j])
                continue
            # Both px[i] and px[j] on the boundary.
            cx, cy, r = _circle_two_boundary(px, py, j, px[i], py[i], px[j], py[j])
    return cx, cy, r


def _circle_two_boundary(px, py, upto, ax, ay, bx, by):
    cx, cy, r = _circle_from_two(ax, ay, bx, by)
    lx = ly = lr = None
    rx = ry = rr = None
    lcross = rcross = 0.0
    for k in range(upto + 1):
        if _in_circle(cx, cy, r, px[k], py[k]):
            continue
        cross = (bx - ax) * (py[k] - ay) - (by - ay) * (px[k] - ax)
        circ = _circumcircle(ax, ay, bx, by, px[k], py[k])
        if circ is None:
            continue
        ccross = (bx - ax) * (circ[1] - ay) - (by - ay) * (circ[0] - ax)
        if cross > 0.0 and (lr is None or ccross > lcross):
            lx, ly, lr = circ
            lcross = ccross
        elif cross < 0.0 and (rr is None or ccross < rcross):
            rx, ry, rr = circ
            rcross = ccross
    if lr is None and rr is None:
        return cx, cy, r
    if lr is None:
        return rx, ry, rr
    if rr is None:
        return lx, ly, lr
    return (lx, ly, lr) if lr <= rr else (rx, ry, rr)


def min_area_rect(hxs, hys):
    """Minimum-area enclosing rectangle of a CCW convex hull.

    Rotating calipers over hull edges.  Area ties are resolved toward
    the smaller rectangle width (a frame-independent property, so the
    result survives input rotation), then toward the smallest rotation
    angle in [0, pi/2) for identical-shape ties such as square hulls.
    Returns (width, length, corners) with width <= length and corners a
    tuple of 4 (x, y) pairs in CCW order.
    """
    hx = np.asarray(hxs, dtype=np.float64).tolist()
    hy = np.asarray(hys, dtype=np.float64).tolist()
    n = len(hx)
    if n < 3:
        raise ValueError("hull must have at least 3 vertices")
    best = None  # (area, width, angle, ux, uy, minu, maxu, minv, maxv)
    for i in range(n):
        ex = hx[(i + 1) % n] - hx[i]
        ey = hy[(i + 1) % n] - hy[i]
        elen = math.hypot(ex, ey)
        if elen == 0.0:
            continue
        ux = ex / elen
        uy = ey / elen
        minu = math.inf
        maxu = -math.inf
        minv = math.inf
        maxv = -math.inf
        for k in range(n):
            u = hx[k] * ux + hy[k] * uy
            v = -hx[k] * uy + hy[k] * ux
            if u < minu:
                minu = u
            if u > maxu:
                maxu = u
            if v < minv:
                minv = v
            if v > maxv:
                maxv = v
        area = (maxu - minu) * (maxv - minv)
        width = min(maxu - minu, maxv - minv)
        angle = math.atan2(uy, ux) % (math.pi / 2.0)
        if best is None:
            take = True
        elif area < best[0] * (1.0 - 1e-12):
            take = True
        elif area <= best[0] * (1.0 + 1e-12):
            if width < best[1] * (1.0 - 1e-12):
                take = True
            else:
                take = width <= best[1] * (1.0 + 1e-12) and angle < best[2]
        else:
            take = False
        if take:
            best = (area, width, angle, ux, uy, minu, maxu, minv, maxv)
    if best is None:
        raise ValueError("degenerate hull")
    _, _, _, ux, uy, minu, maxu, minv, maxv = best
    w = maxu - minu
    h = maxv - minv
    corners = (
        (minu * ux - minv * uy, minu * uy + minv * ux),
        (maxu * ux - minv * uy, maxu * uy + minv * ux),
        (maxu * ux - maxv * uy, maxu * uy + maxv * ux),
        (minu * ux - maxv * uy, minu * uy + maxv * ux),
    )
    width, length = (w, h) if w <= h else (h, w)
    return width, length, corners


def gaussian_kde(sample, grid, bandwidth):
    """Gaussian KDE of ``sample`` evaluated on ``grid``.

    density[k] = (1 / (n h)) * sum_j K((grid[k] - x_j) / h) with the
    standard normal kernel K.  Chunked so memory stays bounded for large
    samples.
    """
    x = np.asarray(sample, dtype=np.float64)
    g = np.asarray(grid, dtype=np.float64)
    h = float(bandwidth)
    dens = np.zeros(len(g), dtype=np.float64)
    step = 4096
    for lo in range(0, len(x), step):
        z = (g[:, None] - x[None, lo:lo + step]) / h
        dens += np.exp(-0.5 * z * z).sum(axis=1)
    dens /= len(x) * h * math.sqrt(2.0 * math.pi)
    return dens
