"""Steiner symmetrization of convex polygons about an arbitrary line.

Every fiber perpendicular to the axis is replaced by a segment of the same
length centred on the axis. For a polygon the fiber-length function is
piecewise linear with kinks only at vertex projections, so the image is the
polygon through the symmetrized fibers at those projections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import GEOM_TOL, Axis, ConvexPolygon, hausdorff_distance


@dataclass(frozen=True)
class ChordFunction:
    """Fiber lengths ``lengths[i]`` at axis parameters ``breakpoints[i]``."""

    breakpoints: np.ndarray
    lengths: np.ndarray
    axis: Axis

    def __call__(self, t):
        return np.interp(t, self.breakpoints, self.lengths, left=0.0, right=0.0)

    def concavity_defect(self) -> float:
        """Largest violation of discrete concavity (0 when concave)."""
        t, ell = self.breakpoints, self.lengths
        if len(t) < 3:
            return 0.0
        slopes = np.diff(ell) / np.diff(t)
        return float(max(0.0, np.max(np.diff(slopes))))


def chord_lengths_at(P: ConvexPolygon, axis: Axis, ts) -> np.ndarray:
    """Length of P intersected with the fiber at each axis parameter in ``ts``."""
    t, s = axis.parameters(P.vertices)
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    eps = GEOM_TOL * P.diameter
    ta, tb = t, np.roll(t, -1)
    sa, sb = s, np.roll(s, -1)
    dt = tb - ta
    flat = np.abs(dt) <= eps
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = (ts[:, None] - ta[None, :]) / np.where(flat, 1.0, dt)[None, :]
    hit = ~flat[None, :] & (lam >= -1e-12) & (lam <= 1.0 + 1e-12)
    sval = sa[None, :] + np.clip(lam, 0.0, 1.0) * (sb - sa)[None, :]
    hi = np.where(hit, sval, -np.inf).max(axis=1)
    lo = np.where(hit, sval, np.inf).min(axis=1)
    # fibers containing a whole edge (only possible at the extreme parameters)
    on_flat = flat[None, :] & (np.abs(ts[:, None] - ta[None, :]) <= eps)
    if on_flat.any():
        hi = np.maximum(hi, np.where(on_flat, np.maximum(sa, sb)[None, :], -np.inf).max(axis=1))
        lo = np.minimum(lo, np.where(on_flat, np.minimum(sa, sb)[None, :], np.inf).min(axis=1))
    ell = hi - lo
    return np.where(np.isfinite(ell), np.maximum(ell, 0.0), 0.0)


def _merged_breakpoints(t: np.ndarray, eps: float) -> np.ndarray:
    t = np.sort(t)
    groups = np.concatenate([[0], np.cumsum(np.diff(t) > eps)])
    sums = np.bincount(groups, weights=t)
    counts = np.bincount(groups)
    return sums / counts


def chord_function(P: ConvexPolygon, axis: Axis) -> ChordFunction:
    t, _ = axis.parameters(P.vertices)
    bp = _merged_breakpoints(t, GEOM_TOL * P.diameter)
    return ChordFunction(bp, chord_lengths_at(P, axis, bp), axis)


def symmetrized_vertices(chord: ChordFunction, zero_tol: float) -> np.ndarray:
    """CCW vertex list of the symmetrized polygon: lower chain left to right, upper chain back."""
    axis = chord.axis
    t, half = chord.breakpoints, 0.5 * chord.lengths
    centre = axis.base + np.outer(t, axis.direction)
    off = np.outer(half, axis.normal)
    lower = centre - off
    upper = centre + off
    out = list(lower)
    for k in range(len(t) - 1, -1, -1):
        if chord.lengths[k] > zero_tol:
            out.append(upper[k])
    v = np.array(out)
    # an extreme zero-length fiber emits its single point once
    if chord.lengths[0] <= zero_tol:
        v[0] = centre[0]
    if chord.lengths[-1] <= zero_tol:
        v[len(t) - 1] = centre[-1]
    keep = np.hypot(*(np.roll(v, -1, axis=0) - v).T) > zero_tol
    return v[keep]


def steiner_symmetrize(P: ConvexPolygon, axis: Axis) -> ConvexPolygon:
    """Steiner symmetral of P with respect to ``axis``; area is preserved."""
    chord = chord_function(P, axis)
    v = symmetrized_vertices(chord, GEOM_TOL * P.diameter)
    return ConvexPolygon(v, tol=1e-10)


def is_axis_symmetric(P: ConvexPolygon, axis: Axis, tol: float = 1e-9) -> bool:
    return hausdorff_distance(P, steiner_symmetrize(P, axis)) < tol * P.diameter


def reflection_defect(P: ConvexPolygon, axis: Axis) -> float:
    """Hausdorff distance between P and its mirror image across ``axis``."""
    mirrored = ConvexPolygon._trusted(axis.reflect(P.vertices)[::-1])
    return hausdorff_distance(P, mirrored)
