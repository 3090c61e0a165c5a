# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernels.

Twin of ``_pykernels``: identical signatures, algorithms, and tolerances,
so either backend can serve the same callers.
"""

from libc.math cimport atan2, fmod, hypot, exp, sqrt, M_PI, INFINITY
from libc.stdlib cimport malloc, free

import numpy as np

cdef double CIRCLE_EPS = 1.0 + 1e-14


def ring_signed_area(xs, ys):
    """Shoelace signed area of a closed ring (positive when CCW)."""
    cdef double[::1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double s = 0.0
    for i in range(n - 1):
        s += x[i] * y[i + 1] - x[i + 1] * y[i]
    return 0.5 * s


def ring_perimeter(xs, ys):
    """Total boundary length of a closed ring."""
    cdef double[::1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double s = 0.0
    for i in range(n - 1):
        s += hypot(x[i + 1] - x[i], y[i + 1] - y[i])
    return s


def convex_hull(xs, ys):
    """Monotone-chain convex hull; CCW, open, collinear points dropped."""
    x_arr = np.ascontiguousarray(xs, dtype=np.float64)
    y_arr = np.ascontiguousarray(ys, dtype=np.float64)
    order = np.lexsort((y_arr, x_arr))
    cdef double[::1] x = x_arr
    cdef double[::1] y = y_arr
    cdef long[::1] idx = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t n = x.shape[0]
    cdef double *sx = <double *> malloc(n * sizeof(double))
    cdef double *sy = <double *> malloc(n * sizeof(double))
    cdef Py_ssize_t *chain = <Py_ssize_t *> malloc(2 * n * sizeof(Py_ssize_t))
    if sx == NULL or sy == NULL or chain == NULL:
        free(sx); free(sy); free(chain)
        raise MemoryError()
    cdef Py_ssize_t m = 0, i, j, k, lower_len, top
    cdef double px, py
    try:
        # Sorted order with exact duplicates removed.
        for i in range(n):
            j = idx[i]
            if m > 0 and x[j] == sx[m - 1] and y[j] == sy[m - 1]:
                continue
            sx[m] = x[j]
            sy[m] = y[j]
            m += 1
        if m < 3:
            raise ValueError("convex hull needs 3 non-collinear points")
        top = 0
        for i in range(m):
            px = sx[i]
            py = sy[i]
            while top >= 2 and ((sx[chain[top - 1]] - sx[chain[top - 2]])
                                * (py - sy[chain[top - 2]])
                                - (sy[chain[top - 1]] - sy[chain[top - 2]])
                                * (px - sx[chain[top - 2]])) <= 0.0:
                top -= 1
            chain[top] = i
            top += 1
        lower_len = top - 1  # last point re-enters via the upper chain
        for i in range(m - 2, -1, -1):
            px = sx[i]
            py = sy[i]
            while top >= lower_len + 2 and ((sx[chain[top - 1]] - sx[chain[top - 2]])
                                            * (py - sy[chain[top - 2]])
                                            - (sy[chain[top - 1]] - sy[chain[top - 2]])
                                            * (px - sx[chain[top - 2]])) <= 0.0:
                top -= 1
            chain[top] = i
            top += 1
        top -= 1  # drop the closing repeat of the first point
        if top < 3:
            raise ValueError("all points are collinear")
        hx = np.empty(top, dtype=np.float64)
        hy = np.empty(top, dtype=np.float64)
        for k in range(top):
            hx[k] = sx[chain[k]]
            hy[k] = sy[chain[k]]
        return hx, hy
    finally:
        free(sx)
        free(sy)
        free(chain)


cdef inline bint _in_circle(double cx, double cy, double r,
                            double px, double py) nogil:
    return hypot(px - cx, py - cy) <= r * CIRCLE_EPS


cdef inline void _circle_from_two(double ax, double ay, double bx, double by,
                                  double *cx, double *cy, double *r) nogil:
    cx[0] = (ax + bx) / 2.0
    cy[0] = (ay + by) / 2.0
    cdef double r1 = hypot(cx[0] - ax, cy[0] - ay)
    cdef double r2 = hypot(cx[0] - bx, cy[0] - by)
    r[0] = r1 if r1 >= r2 else r2


cdef inline bint _circumcircle(double ax, double ay, double bx, double by,
                               double cx, double cy,
                               double *ux, double *uy, double *ur) nogil:
    cdef double ox = (min(ax, min(bx, cx)) + max(ax, max(bx, cx))) / 2.0
    cdef double oy = (min(ay, min(by, cy)) + max(ay, max(by, cy))) / 2.0
    cdef double tax = ax - ox, tay = ay - oy
    cdef double tbx = bx - ox, tby = by - oy
    cdef double tcx = cx - ox, tcy = cy - oy
    cdef double d = (tax * (tby - tcy) + tbx * (tcy - tay) + tcx * (tay - tby)) * 2.0
    if d == 0.0:
        return False
    ux[0] = ox + ((tax * tax + tay * tay) * (tby - tcy)
                  + (tbx * tbx + tby * tby) * (tcy - tay)
                  + (tcx * tcx + tcy * tcy) * (tay - tby)) / d
    uy[0] = oy + ((tax * tax + tay * tay) * (tcx - tbx)
                  + (tbx * tbx + tby * tby) * (tax - tcx)
                  + (tcx * tcx + tcy * tcy) * (tbx - tax)) / d
    cdef double ra = hypot(ux[0] - ax, uy[0] - ay)
    cdef double rb = hypot(ux[0] - bx, uy[0] - by)
    cdef double rc = hypot(ux[0] - cx, uy[0] - cy)
    ur[0] = max(ra, max(rb, rc))
    return True


cdef void _circle_two_boundary(double[::1] px, double[::1] py, Py_ssize_t upto,
                               double ax, double ay, double bx, double by,
                               double *ocx, double *ocy, double *orr) nogil:
    cdef double cx, cy, r
    _circle_from_two(ax, ay, bx, by, &cx, &cy, &r)
    cdef bint has_l = False, has_r = False
    cdef double lx = 0, ly = 0, lr = 0, rx = 0, ry = 0, rr = 0
    cdef double lcross = 0, rcross = 0
    cdef double cross, ccross, qx, qy, qr
    cdef Py_ssize_t k
    for k in range(upto + 1):
        if _in_circle(cx, cy, r, px[k], py[k]):
            continue
        cross = (bx - ax) * (py[k] - ay) - (by - ay) * (px[k] - ax)
        if not _circumcircle(ax, ay, bx, by, px[k], py[k], &qx, &qy, &qr):
            continue
        ccross = (bx - ax) * (qy - ay) - (by - ay) * (qx - ax)
        if cross > 0.0 and (not has_l or ccross > lcross):
            lx = qx; ly = qy; lr = qr
            lcross = ccross
            has_l = True
        elif cross < 0.0 and (not has_r or ccross < rcross):
            rx = qx; ry = qy; rr = qr
            rcross = ccross
            has_r = True
    if not has_l and not has_r:
        ocx[0] = cx; ocy[0] = cy; orr[0] = r
    elif not has_l:
        ocx[0] = rx; ocy[0] = ry; orr[0] = rr
    elif not has_r:
        ocx[0] = lx; ocy[0] = ly; orr[0] = lr
    elif lr <= rr:
        ocx[0] = lx; ocy[0] = ly; orr[0] = lr
    else:
        ocx[0] = rx; ocy[0] = ry; orr[0] = rr


def min_enclosing_circle(xs, ys):
    """Smallest enclosing circle, points processed in input order."""
    cdef double[::1] px = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] py = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t n = px.shape[0]
    if n == 0:
        raise ValueError("empty point set")
    cdef double cx = px[0], cy = py[0], r = 0.0
    cdef double dx, dy, dr
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(1, n):
            if _in_circle(cx, cy, r, px[i], py[i]):
                continue
            cx = px[i]; cy = py[i]; r = 0.0
            for j in range(i):
                if _in_circle(cx, cy, r, px[j], py[j]):
                    continue
                if r == 0.0:
                    _circle_from_two(px[i], py[i], px[j], py[j], &cx, &cy, &r)
                    continue
                _circle_two_boundary(px, py, j, px[i], py[i], px[j], py[j],
                                     &dx, &dy, &dr)
                cx = dx; cy = dy; r = dr
    return cx, cy, r


def min_area_rect(hxs, hys):
    """Minimum-area rectangle of a CCW convex hull (rotating calipers).

    Area ties resolve to the smaller width (rotation-independent), then
    the smallest rotation angle in [0, pi/2).
    """
    cdef double[::1] hx = np.ascontiguousarray(hxs, dtype=np.float64)
    cdef double[::1] hy = np.ascontiguousarray(hys, dtype=np.float64)
    cdef Py_ssize_t n = hx.shape[0]
    if n < 3:
        raise ValueError("hull must have at least 3 vertices")
    cdef double best_area = INFINITY, best_width = INFINITY, best_angle = INFINITY
    cdef double bux = 0, buy = 0, bminu = 0, bmaxu = 0, bminv = 0, bmaxv = 0
    cdef bint found = False, take
    cdef Py_ssize_t i, k
    cdef double ex, ey, elen, ux, uy, u, v
    cdef double minu, maxu, minv, maxv, area, width, angle
    with nogil:
        for i in range(n):
            ex = hx[(i + 1) % n] - hx[i]
            ey = hy[(i + 1) % n] - hy[i]
            elen = hypot(ex, ey)
            if elen == 0.0:
                continue
            ux = ex / elen
            uy = ey / elen
            minu = INFINITY; maxu = -INFINITY
            minv = INFINITY; maxv = -INFINITY
            for k in range(n):
                u = hx[k] * ux + hy[k] * uy
                v = -hx[k] * uy + hy[k] * ux
                if u < minu: minu = u
                if u > maxu: maxu = u
                if v < minv: minv = v
                if v > maxv: maxv = v
            area = (maxu - minu) * (maxv - minv)
            width = maxu - minu
            if maxv - minv < width:
                width = maxv - minv
            angle = fmod(atan2(uy, ux), M_PI / 2.0)
            if angle < 0.0:
                angle += M_PI / 2.0
            if not found:
                take = True
            elif area < best_area * (1.0 - 1e-12):
                take = True
            elif area <= best_area * (1.0 + 1e-12):
                if width < best_width * (1.0 - 1e-12):
                    take = True
                else:
                    take = (width <= best_width * (1.0 + 1e-12)
                            and angle < best_angle)
            else:
                take = False
            if take:
                best_area = area
                best_width = width
                best_angle = angle
                bux = ux; buy = uy
                bminu = minu; bmaxu = maxu; bminv = minv; bmaxv = maxv
                found = True
    if not found:
        raise ValueError("degenerate hull")
    cdef double w = bmaxu - bminu
    cdef double h = bmaxv - bminv
    corners = (
        (bminu * bux - bminv * buy, bminu * buy + bminv * bux),
        (bmaxu * bux - bminv * buy, bmaxu * buy + bminv * bux),
        (bmaxu * bux - bmaxv * buy, bmaxu * buy + bmaxv * bux),
        (bminu * bux - bmaxv * buy, bminu * buy + bmaxv * bux),
    )
    if w <= h:
        return w, h, corners
    return h, w, corners


def gaussian_kde(sample, grid, bandwidth):
    """Gaussian KDE of ``sample`` on ``grid``; see the pure twin."""
    cdef double[::1] x = np.ascontiguousarray(sample, dtype=np.float64)
    cdef double[::1] g = np.ascontiguousarray(grid, dtype=np.float64)
    cdef double h = bandwidth
    cdef Py_ssize_t n = x.shape[0], m = g.shape[0]
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] dens = out
    cdef double norm = 1.0 / (n * h * sqrt(2.0 * M_PI))
    cdef double z, s
    cdef Py_ssize_t k, j
    with nogil:
        for k in range(m):
            s = 0.0
            for j in range(n):
                z = (g[k] - x[j]) / h
                s += exp(-0.5 * z * z)
            dens[k] = s * norm
    return out
