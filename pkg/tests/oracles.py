"""Independent reference computations used only by the test-suite.

Kernel double integrals over a convex polygon are evaluated through the
line-measure identity dx dy = |t1 - t2| dt1 dt2 dp dtheta (theta in [0, pi)):
every line meets E in one chord of length L, so

    int_E int_E   K = int_0^pi int_p  M(L) dp dtheta,  M(L) = 2 int_0^L (L - r) r K(r) dr
    int_E int_E^c K = int_0^pi int_p  F(L) dp dtheta,  F(L) = 2 int_0^L int_r^inf t K(t) dt dr

This shares nothing with the radial-potential engine (no rays, no fan mesh).
"""

from __future__ import annotations

import math

import numpy as np


def _chords(verts: np.ndarray, theta: float, ps: np.ndarray) -> np.ndarray:
    e = np.array([math.cos(theta), math.sin(theta)])
    n = np.array([-e[1], e[0]])
    ed = np.roll(verts, -1, axis=0) - verts
    nrm = np.column_stack([ed[:, 1], -ed[:, 0]])
    off = np.einsum("ij,ij->i", nrm, verts)
    en = nrm @ e
    nn = nrm @ n
    rhs = off[None, :] - ps[:, None] * nn[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = rhs / en[None, :]
    upper = np.where(en[None, :] > 1e-300, bound, np.inf).min(axis=1)
    lower = np.where(en[None, :] < -1e-300, bound, -np.inf).max(axis=1)
    return np.maximum(upper - lower, 0.0)


def _power_segment(coef, gamma, la, lb, dp):
    """int over a segment where L is linear from la to lb of coef * L^gamma."""
    la, lb = np.asarray(la, float), np.asarray(lb, float)
    diff = lb - la
    scale = np.maximum(np.abs(la), np.abs(lb))
    small = np.abs(diff) <= 1e-7 * np.maximum(scale, 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = (lb ** (gamma + 1) - la ** (gamma + 1)) / ((gamma + 1) * diff)
    mid = 0.5 * (la + lb)
    approx = mid**gamma + gamma * (gamma - 1) / 24.0 * mid ** (gamma - 2) * diff**2
    return coef * dp * np.where(small, approx, exact)


def _fiber_integral(kind: str, param: float, verts: np.ndarray, theta: float, gl: int) -> float:
    e = np.array([math.cos(theta), math.sin(theta)])
    n = np.array([-e[1], e[0]])
    proj = np.unique(verts @ n)
    x, w = np.polynomial.legendre.leggauss(gl)
    total = 0.0
    if kind in ("frac-exterior", "power-interior"):
        # exact: chord length is linear between vertex projections
        ell = _chords(verts, theta, proj)
        if kind == "frac-exterior":
            s = param
            coef, gamma = 2.0 / (s * (1.0 - s)), 1.0 - s
        else:
            a = param
            coef, gamma = 2.0 / (a * (a + 1.0)), a + 1.0
        return float(np.sum(_power_segment(coef, gamma, ell[:-1], ell[1:], np.diff(proj))))
    for lo, hi in zip(proj[:-1], proj[1:]):
        half = 0.5 * (hi - lo)
        ps = lo + half * (x + 1.0)
        L = _chords(verts, theta, ps)
        b = param
        if kind == "exp-exterior":
            f = 2.0 * (2.0 - (2.0 + b * L) * np.exp(-b * L)) / b**3
        elif kind == "exp-interior":
            a1 = (1.0 - (1.0 + b * L) * np.exp(-b * L)) / b**2
            a2 = (2.0 - (2.0 + 2.0 * b * L + (b * L) ** 2) * np.exp(-b * L)) / b**3
            f = 2.0 * (L * a1 - a2)
        else:
            raise ValueError(kind)
        total += half * float(np.dot(w, f))
    return total


def line_integral(kind: str, param: float, verts, gl: int = 24, gl_theta: int = 24) -> float:
    """Oracle for nonlocal perimeter ('exp-exterior', 'frac-exterior') or
    self-interaction ('exp-interior', 'power-interior')."""
    verts = np.asarray(verts, dtype=float)
    diffs = verts[:, None, :] - verts[None, :, :]
    ang = np.mod(np.arctan2(diffs[..., 1], diffs[..., 0]).ravel(), np.pi)
    crit = np.unique(np.concatenate([[0.0, np.pi], ang]))
    crit = crit[np.concatenate([[True], np.diff(crit) > 1e-13])]
    if crit[-1] < np.pi:
        crit = np.append(crit, np.pi)
    x, w = np.polynomial.legendre.leggauss(gl_theta)
    total = 0.0
    for lo, hi in zip(crit[:-1], crit[1:]):
        half = 0.5 * (hi - lo)
        for xi, wi in zip(x, w):
            total += half * wi * _fiber_integral(kind, param, verts, lo + half * (xi + 1.0), gl)
    return total


def exterior_mass_mc(verts, x, beta: float, samples: int, seed: int = 0):
    """Monte Carlo estimate of int_{E^c} exp(-beta |x-y|) dy and its standard error.

    Sample y = x + r (cos t, sin t) with r ~ Gamma(2, 1/beta) (density beta^2 r e^{-beta r}),
    t uniform; the integrand ratio is the constant 2 pi / beta^2 times 1{y not in E}.
    """
    rng = np.random.default_rng(seed)
    verts = np.asarray(verts, dtype=float)
    ed = np.roll(verts, -1, axis=0) - verts
    nrm = np.column_stack([ed[:, 1], -ed[:, 0]])
    off = np.einsum("ij,ij->i", nrm, verts)
    kappa = 2.0 * math.pi / beta**2
    hits = 0
    done = 0
    chunk = 1_000_000
    while done < samples:
        m = min(chunk, samples - done)
        r = rng.gamma(2.0, 1.0 / beta, m)
        t = rng.uniform(0.0, 2.0 * math.pi, m)
        y = np.asarray(x)[None, :] + r[:, None] * np.column_stack([np.cos(t), np.sin(t)])
        outside = np.any(y @ nrm.T > off[None, :], axis=1)
        hits += int(outside.sum())
        done += m
    p = hits / samples
    return kappa * p, kappa * math.sqrt(p * (1 - p) / samples)


def interaction_mc_power(verts, alpha: float, samples: int, seed: int = 0):
    """Monte Carlo for int_E int_E |x-y|^(alpha-2): x uniform in E, direction uniform,
    radial integral exact along the ray: estimator |E| * 2 pi * rho^alpha / alpha."""
    rng = np.random.default_rng(seed)
    verts = np.asarray(verts, dtype=float)
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    ed = np.roll(verts, -1, axis=0) - verts
    nrm = np.column_stack([ed[:, 1], -ed[:, 0]])
    nrm = nrm / np.hypot(nrm[:, 0], nrm[:, 1])[:, None]
    off = np.einsum("ij,ij->i", nrm, verts)
    area = 0.5 * np.sum(verts[:, 0] * np.roll(verts[:, 1], -1) - np.roll(verts[:, 0], -1) * verts[:, 1])
    vals = []
    need = samples
    while need > 0:
        pts = lo + (hi - lo) * rng.random((min(2 * need + 100, 2_000_000), 2))
        inside = np.all(pts @ nrm.T < off[None, :], axis=1)
        pts = pts[inside][:need]
        t = rng.uniform(0.0, 2.0 * math.pi, len(pts))
        d = np.column_stack([np.cos(t), np.sin(t)])
        slack = off[None, :] - pts @ nrm.T
        den = d @ nrm.T
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = np.where(den > 0, slack / den, np.inf).min(axis=1)
        vals.append(area * 2.0 * math.pi * rho**alpha / alpha)
        need -= len(pts)
    v = np.concatenate(vals)
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(len(v)))


def raster_steiner(verts, axis_base, axis_dir, res: int = 4096):
    """Rasterized Steiner symmetrization: column counting on a res x res grid
    in the axis frame; returns (area, polygon vertices of the symmetrized columns)."""
    verts = np.asarray(verts, dtype=float)
    u = np.asarray(axis_dir, float) / np.linalg.norm(axis_dir)
    v = np.array([-u[1], u[0]])
    rel = verts - np.asarray(axis_base, float)
    t, s = rel @ u, rel @ v
    t0, t1 = t.min(), t.max()
    s0, s1 = s.min(), s.max()
    pad = 1e-9
    tc = np.linspace(t0 - pad, t1 + pad, res + 1)
    sc = np.linspace(s0 - pad, s1 + pad, res + 1)
    dt, ds = tc[1] - tc[0], sc[1] - sc[0]
    tm = 0.5 * (tc[:-1] + tc[1:])
    sm = 0.5 * (sc[:-1] + sc[1:])
    ts = np.column_stack([t, s])
    ed = np.roll(ts, -1, axis=0) - ts
    nrm = np.column_stack([ed[:, 1], -ed[:, 0]])
    off = np.einsum("ij,ij->i", nrm, ts)
    counts = np.zeros(res)
    for k in range(0, res, 256):
        T, S = np.meshgrid(tm[k:k + 256], sm, indexing="ij")
        pts = np.stack([T.ravel(), S.ravel()], axis=1)
        inside = np.all(pts @ nrm.T <= off[None, :], axis=1).reshape(T.shape)
        counts[k:k + 256] = inside.sum(axis=1)
    lengths = counts * ds
    area = float(lengths.sum() * dt)
    keep = lengths > 0
    lower = np.column_stack([tm[keep], -0.5 * lengths[keep]])
    upper = np.column_stack([tm[keep], 0.5 * lengths[keep]])[::-1]
    poly_ts = np.vstack([lower, upper])
    world = np.asarray(axis_base, float) + np.outer(poly_ts[:, 0], u) + np.outer(poly_ts[:, 1], v)
    return area, world, max(dt, ds)
