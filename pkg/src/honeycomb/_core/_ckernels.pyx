# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport asinh, exp, expm1, ceil, pow, sqrt, cos, sin, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef enum:
    EXPONENTIAL = 0
    RIESZ_POWER = 1
    FRACTIONAL = 2
    INTERIOR = 0


cdef inline double _profile(double rho, int family, double param, int mode) nogil:
    cdef double x, em1
    if family == EXPONENTIAL:
        x = param * rho
        if mode == INTERIOR:
            if x < 1e-2:
                return x * x * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0 + x * x * x * x / 144.0) / (param * param)
            em1 = expm1(-x)
            return (-em1 - x * (em1 + 1.0)) / (param * param)
        return (1.0 + x) * exp(-x) / (param * param)
    if family == RIESZ_POWER:
        if param == 1.0:
            return rho
        return pow(rho, param) / param
    return pow(rho, -param) / param


def radial_potentials(const double[:, ::1] verts, const double[:, ::1] pts, int family, double param,
                      int mode, const double[::1] nodes, const double[::1] weights, double panel_len):
    if family == RIESZ_POWER and mode != INTERIOR:
        raise ValueError("power kernel has no integrable tail")
    if family == FRACTIONAL and mode == INTERIOR:
        raise ValueError("fractional kernel is not integrable at the origin")
    if family < 0 or family > 2:
        raise ValueError(f"unknown kernel family {family}")
    cdef Py_ssize_t n = verts.shape[0], k = pts.shape[0], q = nodes.shape[0]
    cdef Py_ssize_t i, j, m, p, g, panels
    cdef double ax, ay, bx, by, ex, ey, el, nx, ny, d, w1, w2, z1, z2, h, e, epanel, estep, ch
    cdef double total, psum
    cdef double *shift = <double *> malloc(q * sizeof(double))
    if shift == NULL:
        raise MemoryError()
    out = np.zeros(k, dtype=np.float64)
    cdef double[::1] res = out
    cdef bint bad = False
    with nogil:
        for p in range(k):
            total = 0.0
            for i in range(n):
                j = i + 1
                if j == n:
                    j = 0
                ax = verts[i, 0] - pts[p, 0]
                ay = verts[i, 1] - pts[p, 1]
                bx = verts[j, 0] - pts[p, 0]
                by = verts[j, 1] - pts[p, 1]
                ex = verts[j, 0] - verts[i, 0]
                ey = verts[j, 1] - verts[i, 1]
                el = sqrt(ex * ex + ey * ey)
                ex = ex / el
                ey = ey / el
                nx = ey
                ny = -ex
                d = ax * nx + ay * ny
                if d <= 0.0:
                    bad = True
                    break
                w1 = ax * ex + ay * ey
                w2 = bx * ex + by * ey
                z1 = asinh(w1 / d)
                z2 = asinh(w2 / d)
                panels = <Py_ssize_t>ceil((z2 - z1) / panel_len)
                if panels < 1:
                    panels = 1
                h = (z2 - z1) / panels
                # exp(z) at every node factors into panel start times a fixed shift
                for m in range(q):
                    shift[m] = exp(0.5 * (nodes[m] + 1.0) * h)
                epanel = exp(z1)
                estep = exp(h)
                for g in range(panels):
                    psum = 0.0
                    for m in range(q):
                        e = epanel * shift[m]
                        ch = 0.5 * (e + 1.0 / e)
                        psum = psum + weights[m] * _profile(d * ch, family, param, mode) / ch
                    total = total + 0.5 * h * psum
                    epanel = epanel * estep
            if bad:
                break
            res[p] = total
    free(shift)
    if bad:
        raise ValueError("point not interior")
    return out


def ray_exit(verts, pts, thetas):
    cdef const double[:, ::1] V = np.ascontiguousarray(verts, dtype=np.float64)
    cdef const double[:, ::1] P = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
    cdef const double[::1] T = np.ascontiguousarray(np.atleast_1d(thetas), dtype=np.float64)
    cdef Py_ssize_t n = V.shape[0], k = P.shape[0], i, j, p
    cdef double ex, ey, el, nx, ny, slack, denom, dx, dy, best, r
    out = np.empty(k, dtype=np.float64)
    cdef double[::1] res = out
    with nogil:
        for p in range(k):
            dx = cos(T[p])
            dy = sin(T[p])
            best = INFINITY
            for i in range(n):
                j = i + 1
                if j == n:
                    j = 0
                ex = V[j, 0] - V[i, 0]
                ey = V[j, 1] - V[i, 1]
                el = sqrt(ex * ex + ey * ey)
                nx = ey / el
                ny = -ex / el
                denom = dx * nx + dy * ny
                if denom > 0.0:
                    slack = (V[i, 0] - P[p, 0]) * nx + (V[i, 1] - P[p, 1]) * ny
                    r = slack / denom
                    if r < best:
                        best = r
            res[p] = best
    return out


cdef double _directed(const double[:, ::1] A, const double[:, ::1] B) nogil:
    cdef Py_ssize_t na = A.shape[0], nb = B.shape[0], i, j, jn
    cdef double worst = 0.0, best, ex, ey, rx, ry, lam, ee, dx, dy, dist
    cdef bint inside
    for i in range(na):
        inside = True
        best = INFINITY
        for j in range(nb):
            jn = j + 1
            if jn == nb:
                jn = 0
            ex = B[jn, 0] - B[j, 0]
            ey = B[jn, 1] - B[j, 1]
            rx = A[i, 0] - B[j, 0]
            ry = A[i, 1] - B[j, 1]
            if ex * ry - ey * rx < 0.0:
                inside = False
            ee = ex * ex + ey * ey
            lam = (rx * ex + ry * ey) / ee
            if lam < 0.0:
                lam = 0.0
            elif lam > 1.0:
                lam = 1.0
            dx = rx - lam * ex
            dy = ry - lam * ey
            dist = dx * dx + dy * dy
            if dist < best:
                best = dist
        if not inside and best > worst:
            worst = best
    return sqrt(worst)


def hausdorff(A, B):
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef double h1, h2
    with nogil:
        h1 = _directed(a, b)
        h2 = _directed(b, a)
    return h1 if h1 > h2 else h2
