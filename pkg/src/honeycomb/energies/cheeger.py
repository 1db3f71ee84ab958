"""Cheeger constant of a convex polygon.

For planar convex sets h(P) = 1/t where t is the unique root of
|P (-) t| = pi t^2, with P (-) t the inner parallel body; the Cheeger set is
the union of disks of radius t inside P.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry import ConvexPolygon, area, edge_normals, perimeter
from .base import EnergyResult

BISECTION_RTOL = 1e-12


def _clip_area(v: np.ndarray, n: np.ndarray, c: np.ndarray) -> float:
    pts = v
    for ni, ci in zip(n, c):
        if len(pts) == 0:
            return 0.0
        val = ci - pts @ ni
        nxt = np.roll(pts, -1, axis=0)
        vn = np.roll(val, -1)
        out = []
        for k in range(len(pts)):
            if val[k] >= 0.0:
                out.append(pts[k])
            if (val[k] >= 0.0) != (vn[k] >= 0.0):
                out.append(pts[k] + val[k] / (val[k] - vn[k]) * (nxt[k] - pts[k]))
        pts = np.array(out) if out else np.empty((0, 2))
    if len(pts) < 3:
        return 0.0
    x, y = pts[:, 0], pts[:, 1]
    return max(0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)), 0.0)


def inner_parallel_area(P: ConvexPolygon, t: float) -> float:
    """Area of {x in P : dist(x, boundary) >= t}."""
    n, c = edge_normals(P)
    return _clip_area(P.vertices, n, c - t)


def cheeger_constant(P: ConvexPolygon) -> EnergyResult:
    lo, hi = 0.0, 2.0 * area(P) / perimeter(P)  # hi bounds the inradius
    iterations = 0
    while hi - lo > BISECTION_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if inner_parallel_area(P, mid) > math.pi * mid * mid:
            lo = mid
        else:
            hi = mid
        iterations += 1
    t = 0.5 * (lo + hi)
    # width in t mapped to h = 1/t
    err = (hi - lo) / (lo * hi)
    return EnergyResult(1.0 / t, err, {"radius": t, "iterations": iterations})
