"""Kernel energies reduced to single-domain integrals of radial potentials.

For a convex set every ray from an interior point leaves it exactly once, so

    psi(x) = int_E   K(|x - y|) dy = int_0^{2pi} Gin(rho(x, theta)) dtheta
    phi(x) = int_E^c K(|x - y|) dy = int_0^{2pi} Gout(rho(x, theta)) dtheta

with closed-form radial profiles Gin(r) = int_0^r K(t) t dt and
Gout(r) = int_r^inf K(t) t dt. The angular integral is split per edge and
evaluated in the sinh-substituted variable, which keeps it accurate for
points arbitrarily close to an edge. The outer integral over E uses a fan of
triangles from the centroid with geometric grading towards the boundary.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .. import _core
from ..geometry import GEOM_TOL, ConvexPolygon, NotInteriorError, centroid, signed_distances
from .base import EnergyResult, KernelNotAdmissible, KernelSpec, float_floor

INTERIOR = "interior"
EXTERIOR = "exterior"

ANGULAR_ORDER = 12
PANEL_LENGTH = 1.0
DEFAULT_LEVELS = 6
DEFAULT_ORDER = 6


@lru_cache(maxsize=None)
def gauss_legendre(q: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(q)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def _gauss_jacobi_right(q: int, s: float) -> tuple[np.ndarray, np.ndarray]:
    # nodes for int_{-1}^{1} f(x) (1 - x)^(-s) dx
    x, w = roots_jacobi(q, -s, 0.0)
    return x, w


def _mode_code(K: KernelSpec, mode: str) -> int:
    if mode == INTERIOR:
        if not K.integrable_at_origin:
            raise KernelNotAdmissible(f"{K.label()} is not integrable at the origin; interior mode unavailable")
        return _core.INTERIOR
    if mode == EXTERIOR:
        if not K.tail_integrable:
            raise KernelNotAdmissible(f"{K.label()} has no integrable tail; exterior mode unavailable")
        return _core.EXTERIOR
    raise ValueError(f"mode must be {INTERIOR!r} or {EXTERIOR!r}")


def radial_potentials(P: ConvexPolygon, points, K: KernelSpec, mode: str,
                      order: int = ANGULAR_ORDER, panel_len: float = PANEL_LENGTH) -> np.ndarray:
    code = _mode_code(K, mode)
    pts = np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=float)))
    if np.min(signed_distances(P, pts)) <= 0.0:
        raise NotInteriorError("point not interior")
    nodes, weights = gauss_legendre(order)
    return np.asarray(_core.radial_potentials(P.vertices, pts, K.code, K.param, code,
                                              nodes, weights, panel_len))


def radial_potential(P: ConvexPolygon, x, K: KernelSpec, mode: str = INTERIOR,
                     order: int = ANGULAR_ORDER) -> float:
    """Kernel mass of E (interior) or of its complement (exterior) seen from ``x``."""
    x = np.asarray(x, dtype=float)
    if np.min(signed_distances(P, x)) <= GEOM_TOL * P.diameter:
        raise NotInteriorError("point not interior")
    return float(radial_potentials(P, x[None, :], K, mode, order)[0])


def _graded_breaks(levels: int) -> np.ndarray:
    inner = 1.0 - 0.5 ** np.arange(1, levels + 1)
    return np.concatenate([[0.0], inner, [1.0]])


def _symmetric_breaks(levels: int) -> np.ndarray:
    left = 0.5 ** np.arange(levels, 0, -1)
    return np.concatenate([[0.0], left, 1.0 - left[::-1][1:], [1.0]])


def graded_fan_rule(P: ConvexPolygon, levels: int = DEFAULT_LEVELS, order: int = DEFAULT_ORDER,
                    boundary_exponent: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature points and weights for int_P f, refined geometrically towards the boundary.

    Each fan triangle (c, v_i, v_i+1) is mapped from (sigma, tau) in the unit
    square by x = c + tau((1 - sigma) v_i + sigma v_i+1), Jacobian 2 A_i tau.
    ``tau`` layers halve towards the boundary edge; ``sigma`` panels halve
    towards both corners. With ``boundary_exponent`` s > 0 the outermost
    layer carries Gauss-Jacobi weights for an integrand ~ dist^(-s).
    """
    c = centroid(P)
    v = P.vertices
    vn = np.roll(v, -1, axis=0)
    tri_area = 0.5 * ((v[:, 0] - c[0]) * (vn[:, 1] - c[1]) - (v[:, 1] - c[1]) * (vn[:, 0] - c[0]))
    x, w = gauss_legendre(order)

    tb = _graded_breaks(levels)
    tau_nodes, tau_w = [], []
    for lo, hi in zip(tb[:-1], tb[1:]):
        half = 0.5 * (hi - lo)
        if hi == 1.0 and boundary_exponent > 0.0:
            xj, wj = _gauss_jacobi_right(order, boundary_exponent)
            tau_nodes.append(lo + half * (xj + 1.0))
            tau_w.append(half * wj * (1.0 - xj) ** boundary_exponent)
        else:
            tau_nodes.append(lo + half * (x + 1.0))
            tau_w.append(half * w)
    tau = np.concatenate(tau_nodes)
    wt = np.concatenate(tau_w) * tau

    sb = _symmetric_breaks(levels)
    half = 0.5 * np.diff(sb)
    sigma = (sb[:-1, None] + half[:, None] * (x[None, :] + 1.0)).ravel()
    ws = (half[:, None] * w[None, :]).ravel()

    S, T = np.meshgrid(sigma, tau)
    WS, WT = np.meshgrid(ws, wt)
    S, T, W = S.ravel(), T.ravel(), (WS * WT).ravel()
    pts = c + T[None, :, None] * ((1.0 - S)[None, :, None] * (v - c)[:, None, :]
                                  + S[None, :, None] * (vn - c)[:, None, :])
    weights = 2.0 * tri_area[:, None] * W[None, :]
    return pts.reshape(-1, 2), weights.ravel()


def _integrate_potential(P: ConvexPolygon, K: KernelSpec, mode: str, levels: int, order: int,
                         angular: int) -> float:
    singular = mode == EXTERIOR and not K.integrable_at_origin
    pts, wts = graded_fan_rule(P, levels, order, K.param if singular else 0.0)
    # nodes pushed onto the boundary by rounding carry no mass worth keeping
    inside = np.min(signed_distances(P, pts), axis=1) > 0.0
    vals = radial_potentials(P, pts[inside], K, mode, angular)
    return float(np.dot(wts[inside], vals))


def _two_level(P: ConvexPolygon, K: KernelSpec, mode: str, levels: int, order: int,
               angular: int) -> tuple[float, float]:
    if levels < 2 or order < 2:
        raise ValueError("need levels >= 2 and order >= 2")
    fine = _integrate_potential(P, K, mode, levels, order, angular)
    coarse = _integrate_potential(P, K, mode, levels - 1, order - 1, angular)
    return fine, abs(fine - coarse) + float_floor(fine)


def nonlocal_perimeter(P: ConvexPolygon, K: KernelSpec, levels: int = DEFAULT_LEVELS,
                       order: int = DEFAULT_ORDER, angular: int = ANGULAR_ORDER) -> EnergyResult:
    """Interaction of E with its complement, int_E int_{E^c} K(|x - y|) dy dx."""
    if not K.tail_integrable:
        raise KernelNotAdmissible(f"{K.label()} is not admissible for the nonlocal perimeter")
    value, err = _two_level(P, K, EXTERIOR, levels, order, angular)
    return EnergyResult(value, err, {"kernel": K.label(), "levels": levels, "order": order})


def interior_interaction(P: ConvexPolygon, K: KernelSpec, levels: int = DEFAULT_LEVELS,
                         order: int = DEFAULT_ORDER, angular: int = ANGULAR_ORDER) -> EnergyResult:
    """Self-interaction int_E int_E K(|x - y|) dy dx."""
    if not K.integrable_at_origin:
        raise KernelNotAdmissible(f"{K.label()} is not integrable at the origin")
    value, err = _two_level(P, K, INTERIOR, levels, order, angular)
    return EnergyResult(value, err, {"kernel": K.label(), "levels": levels, "order": order})


def riesz_energy(P: ConvexPolygon, K: KernelSpec, levels: int = DEFAULT_LEVELS,
                 order: int = DEFAULT_ORDER, angular: int = ANGULAR_ORDER) -> EnergyResult:
    """Negative self-interaction; decreases under Steiner symmetrization."""
    res = interior_interaction(P, K, levels, order, angular)
    return EnergyResult(-res.value, res.error_estimate, dict(res.diagnostics, sign="negative"))
