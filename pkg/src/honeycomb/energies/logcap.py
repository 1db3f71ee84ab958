"""Logarithmic capacity through the equilibrium measure on the boundary.

The equilibrium measure of a compact convex set lives on its boundary, where
its logarithmic potential is constant. With a piecewise-constant density on
boundary panels and collocation at panel midpoints this is a dense
(m + 1)-square system; the constant gamma gives cap = exp(gamma), normalized
so a disk of radius R has capacity R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..geometry import ConvexPolygon, perimeter
from .base import EnergyResult

MIN_PANELS = 16
DEFAULT_PANELS = 512


@dataclass
class EquilibriumSolution:
    density: np.ndarray
    lengths: np.ndarray
    midpoints: np.ndarray
    robin_constant: float

    @property
    def mass(self) -> float:
        return float(np.dot(self.density, self.lengths))

    @property
    def negative_panels(self) -> int:
        return int(np.count_nonzero(self.density < 0.0))


def panelize(P: ConvexPolygon, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Split the boundary into ``m`` panels, distributed by edge length.

    Returns panel start and end points.
    """
    v = P.vertices
    vn = np.roll(v, -1, axis=0)
    lengths = np.hypot(*(vn - v).T)
    if m < len(v):
        raise ValueError("need at least one panel per edge")
    share = m * lengths / lengths.sum()
    counts = np.maximum(np.floor(share).astype(int), 1)
    # largest remainders take the leftover panels
    while counts.sum() < m:
        counts[np.argmax(share - counts)] += 1
    while counts.sum() > m:
        counts[np.argmax(np.where(counts > 1, counts - share, -np.inf))] -= 1
    starts, ends = [], []
    for a, b, k in zip(v, vn, counts):
        s = np.arange(k + 1) / k
        pts = a + s[:, None] * (b - a)
        starts.append(pts[:-1])
        ends.append(pts[1:])
    return np.vstack(starts), np.vstack(ends)


def _log_panel_matrix(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """A[i, j] = int over segment [a_j, b_j] of log|x_i - y| ds(y)."""
    d = b - a
    L = np.hypot(d[:, 0], d[:, 1])
    t = d / L[:, None]
    rel = a[None, :, :] - x[:, None, :]
    u0 = np.einsum("ijk,jk->ij", rel, t)
    u1 = u0 + L[None, :]
    h = np.abs(rel[..., 0] * t[None, :, 1] - rel[..., 1] * t[None, :, 0])

    def F(u):
        r2 = u * u + h * h
        with np.errstate(divide="ignore", invalid="ignore"):
            val = 0.5 * u * np.log(r2) - u + np.where(h > 0.0, h * np.arctan(u / h), 0.0)
        return np.where(r2 > 0.0, val, 0.0)

    return F(u1) - F(u0)


def equilibrium(P: ConvexPolygon, m: int) -> EquilibriumSolution:
    if m < MIN_PANELS:
        raise ValueError(f"need at least {MIN_PANELS} panels")
    a, b = panelize(P, m)
    mid = 0.5 * (a + b)
    lengths = np.hypot(*(b - a).T)
    n = len(mid)
    A = np.empty((n + 1, n + 1))
    A[:n, :n] = _log_panel_matrix(mid, a, b)
    A[:n, n] = -1.0
    A[n, :n] = lengths
    A[n, n] = 0.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError("singular equilibrium system (degenerate boundary)") from exc
    return EquilibriumSolution(sol[:n], lengths, mid, float(sol[n]))


def log_capacity(P: ConvexPolygon, m: int = DEFAULT_PANELS) -> EnergyResult:
    coarse = equilibrium(P, m)
    fine = equilibrium(P, 2 * m)
    value = math.exp(coarse.robin_constant)
    err = abs(math.exp(fine.robin_constant) - value)
    diag = {
        "panels": m,
        "robin_constant": coarse.robin_constant,
        "negative_panels": coarse.negative_panels,
        "mass_defect": abs(coarse.mass - 1.0),
        "perimeter": perimeter(P),
    }
    return EnergyResult(value, err, diag)
