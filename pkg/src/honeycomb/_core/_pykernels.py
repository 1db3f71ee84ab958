"""Vectorized numpy implementations of the hot kernels.

Signatures mirror ``_ckernels`` exactly; the package picks one of the two at
import time (see ``honeycomb._core``).
"""

import numpy as np

EXPONENTIAL = 0
RIESZ_POWER = 1
FRACTIONAL = 2

INTERIOR = 0
EXTERIOR = 1


def _exp_core(x):
    # (1 - (1 + x) e^{-x}), series below x = 1e-2 to avoid cancellation
    out = np.empty_like(x)
    small = x < 1e-2
    xs = x[small]
    out[small] = xs * xs * (0.5 - xs / 3.0 + xs * xs / 8.0 - xs**3 / 30.0 + xs**4 / 144.0)
    xl = x[~small]
    out[~small] = -np.expm1(-xl) - xl * np.exp(-xl)
    return out


def radial_profile(rho, family, param, mode):
    """Closed-form radial antiderivative of r*K(r), interior (0..rho) or exterior (rho..inf)."""
    rho = np.asarray(rho, dtype=float)
    if family == EXPONENTIAL:
        x = param * rho
        if mode == INTERIOR:
            return _exp_core(x) / (param * param)
        return (1.0 + x) * np.exp(-x) / (param * param)
    if family == RIESZ_POWER:
        if mode != INTERIOR:
            raise ValueError("power kernel has no integrable tail")
        return rho**param / param
    if family == FRACTIONAL:
        if mode != EXTERIOR:
            raise ValueError("fractional kernel is not integrable at the origin")
        return rho ** (-param) / param
    raise ValueError(f"unknown kernel family {family}")


def _edge_frames(verts):
    a = verts
    b = np.roll(verts, -1, axis=0)
    e = b - a
    length = np.hypot(e[:, 0], e[:, 1])
    e = e / length[:, None]
    normal = np.column_stack([e[:, 1], -e[:, 0]])
    return a, b, e, normal


def radial_potentials(verts, pts, family, param, mode, nodes, weights, panel_len):
    """Integrate the radial profile over all directions from each point.

    Each edge is handled in the sinh-substituted variable ``z`` where the ray
    length is ``d*cosh(z)`` and ``dtheta = dz/cosh(z)``; ``[z1, z2]`` is split
    into panels of length at most ``panel_len`` with Gauss-Legendre rule
    ``(nodes, weights)`` on each.
    """
    verts = np.ascontiguousarray(verts, dtype=float)
    pts = np.ascontiguousarray(pts, dtype=float)
    a, b, e, normal = _edge_frames(verts)
    npts, nedge = len(pts), len(verts)
    ax = a[None, :, :] - pts[:, None, :]
    bx = b[None, :, :] - pts[:, None, :]
    d = np.einsum("kij,ij->ki", ax, normal).ravel()
    if np.any(d <= 0.0):
        raise ValueError("point not interior")
    w1 = np.einsum("kij,ij->ki", ax, e).ravel()
    w2 = np.einsum("kij,ij->ki", bx, e).ravel()
    z1 = np.arcsinh(w1 / d)
    z2 = np.arcsinh(w2 / d)
    span = z2 - z1
    counts = np.maximum(1, np.ceil(span / panel_len).astype(np.int64))
    h = span / counts
    pair = np.repeat(np.arange(d.size), counts)
    offsets = np.cumsum(counts) - counts
    local = np.arange(pair.size) - offsets[pair]
    za = z1[pair] + local * h[pair]
    hp = h[pair]
    z = za[:, None] + 0.5 * (np.asarray(nodes)[None, :] + 1.0) * hp[:, None]
    ch = np.cosh(z)
    f = radial_profile(d[pair][:, None] * ch, family, param, mode) / ch
    panel = 0.5 * hp * (f @ np.asarray(weights))
    per_pair = np.bincount(pair, weights=panel, minlength=d.size)
    return per_pair.reshape(npts, nedge).sum(axis=1)


def ray_exit(verts, pts, thetas):
    verts = np.ascontiguousarray(verts, dtype=float)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    a, _, _, normal = _edge_frames(verts)
    slack = np.einsum("ij,ij->i", a, normal)[None, :] - pts @ normal.T
    direction = np.column_stack([np.cos(thetas), np.sin(thetas)])
    denom = direction @ normal.T
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(denom > 0.0, slack / denom, np.inf)
    return r.min(axis=1)


def _directed(A, B):
    bn = np.roll(B, -1, axis=0)
    e = bn - B
    rel = A[:, None, :] - B[None, :, :]
    cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
    inside = np.all(cross >= 0.0, axis=1)
    ee = np.einsum("ij,ij->i", e, e)
    lam = np.clip(np.einsum("kij,ij->ki", rel, e) / ee[None, :], 0.0, 1.0)
    diff = rel - lam[:, :, None] * e[None, :, :]
    dist = np.sqrt(np.einsum("kij,kij->ki", diff, diff)).min(axis=1)
    dist[inside] = 0.0
    return dist.max()


def hausdorff(A, B):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    return max(_directed(A, B), _directed(B, A))
