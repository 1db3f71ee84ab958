"""First Dirichlet eigenvalue of a convex polygon by linear finite elements."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import LinearOperator, cg

from ..geometry import ConvexPolygon, centroid
from .base import EnergyResult

MIN_H_FRACTION = 1e-5
INNER_RTOL = 1e-10
OUTER_RTOL = 1e-10
MAX_OUTER = 2000
MAX_INNER = 20_000


class ConvergenceError(RuntimeError):
    pass


@dataclass
class Mesh:
    nodes: np.ndarray
    triangles: np.ndarray
    boundary_nodes: np.ndarray
    h: float
    min_angle: float

    @property
    def areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        e1, e2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    @property
    def interior_nodes(self) -> np.ndarray:
        mask = np.ones(len(self.nodes), dtype=bool)
        mask[self.boundary_nodes] = False
        return np.flatnonzero(mask)


def _edges(tri: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unique undirected edges and, per triangle, the edge index opposite nothing:
    columns are edges (0,1), (1,2), (2,0)."""
    local = np.stack([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]], axis=1).reshape(-1, 2)
    key = np.sort(local, axis=1)
    uniq, inv = np.unique(key, axis=0, return_inverse=True)
    return uniq, inv.reshape(-1, 3)


def _max_edge(nodes: np.ndarray, tri: np.ndarray) -> float:
    edges, _ = _edges(tri)
    d = nodes[edges[:, 0]] - nodes[edges[:, 1]]
    return float(np.sqrt(np.max(np.einsum("ij,ij->i", d, d))))


def _refine(nodes: np.ndarray, tri: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    edges, t2e = _edges(tri)
    mids = 0.5 * (nodes[edges[:, 0]] + nodes[edges[:, 1]])
    m = len(nodes) + t2e
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    ab, bc, ca = m[:, 0], m[:, 1], m[:, 2]
    new = np.concatenate([
        np.column_stack([a, ab, ca]),
        np.column_stack([ab, b, bc]),
        np.column_stack([ca, bc, c]),
        np.column_stack([ab, bc, ca]),
    ])
    return np.vstack([nodes, mids]), new


def _min_angle(nodes: np.ndarray, tri: np.ndarray) -> float:
    p = nodes[tri]
    best = math.pi
    for i in range(3):
        u = p[:, (i + 1) % 3] - p[:, i]
        v = p[:, (i + 2) % 3] - p[:, i]
        cosang = np.einsum("ij,ij->i", u, v) / (np.hypot(*u.T) * np.hypot(*v.T))
        best = min(best, float(np.min(np.arccos(np.clip(cosang, -1.0, 1.0)))))
    return math.degrees(best)


def triangulate(P: ConvexPolygon, h: float) -> Mesh:
    """Centroid fan refined by edge midpoints until every edge is at most ``h``."""
    if not h > 0 or h < MIN_H_FRACTION * P.diameter:
        raise ValueError(f"mesh size {h} rejected (must exceed {MIN_H_FRACTION:g} * diameter)")
    v = P.vertices
    n = len(v)
    nodes = np.vstack([centroid(P)[None, :], v])
    idx = np.arange(1, n + 1)
    tri = np.column_stack([np.zeros(n, dtype=int), idx, np.roll(idx, -1)])
    while _max_edge(nodes, tri) > h:
        nodes, tri = _refine(nodes, tri)
    edges, t2e = _edges(tri)
    counts = np.bincount(t2e.ravel(), minlength=len(edges))
    boundary = np.unique(edges[counts == 1])
    return Mesh(nodes, tri, boundary, _max_edge(nodes, tri), _min_angle(nodes, tri))


def assemble(mesh: Mesh) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """P1 stiffness and consistent mass matrices."""
    p = mesh.nodes[mesh.triangles]
    area = mesh.areas
    # gradients of barycentric coordinates: rotate the opposite edge
    opp = np.stack([p[:, 2] - p[:, 1], p[:, 0] - p[:, 2], p[:, 1] - p[:, 0]], axis=1)
    grads = np.stack([-opp[..., 1], opp[..., 0]], axis=-1) / (2.0 * area)[:, None, None]
    local_k = np.einsum("tik,tjk->tij", grads, grads) * area[:, None, None]
    local_m = (np.ones((3, 3)) + np.eye(3))[None] * (area / 12.0)[:, None, None]
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    n = len(mesh.nodes)
    K = sparse.coo_matrix((local_k.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    M = sparse.coo_matrix((local_m.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return K, M


def _smallest_eigenvalue(K: sparse.csr_matrix, M: sparse.csr_matrix) -> tuple[float, int]:
    inv_diag = 1.0 / K.diagonal()
    prec = LinearOperator(K.shape, matvec=lambda x: inv_diag * x)
    u = np.ones(K.shape[0])
    u /= math.sqrt(u @ (M @ u))
    lam = (u @ (K @ u))
    for it in range(1, MAX_OUTER + 1):
        rhs = M @ u
        w, info = cg(K, rhs, x0=u / lam, rtol=INNER_RTOL, atol=0.0, maxiter=MAX_INNER, M=prec)
        if info != 0:
            raise ConvergenceError(f"inner solve did not converge (info={info})")
        u = w / math.sqrt(w @ (M @ w))
        new = u @ (K @ u)
        if abs(new - lam) < OUTER_RTOL * abs(new):
            return float(new), it
        lam = new
    raise ConvergenceError("inverse iteration did not converge")


def eigenvalue_on_mesh(mesh: Mesh) -> tuple[float, int]:
    K, M = assemble(mesh)
    free = mesh.interior_nodes
    if len(free) == 0:
        raise ValueError("mesh has no interior nodes; decrease h")
    return _smallest_eigenvalue(K[free][:, free].tocsr(), M[free][:, free].tocsr())


def dirichlet_lambda1(P: ConvexPolygon, h: float = 0.05) -> EnergyResult:
    """Richardson-extrapolated lambda_1 from meshes of size h and h/2."""
    coarse = triangulate(P, h)
    fine = triangulate(P, 0.5 * h)
    lam_h, it_h = eigenvalue_on_mesh(coarse)
    lam_h2, it_h2 = eigenvalue_on_mesh(fine)
    value = lam_h2 + (lam_h2 - lam_h) / 3.0
    diag = {
        "lambda_h": lam_h,
        "lambda_h2": lam_h2,
        "h": h,
        "nodes": int(len(fine.nodes)),
        "min_angle_deg": min(coarse.min_angle, fine.min_angle),
        "outer_iterations": [it_h, it_h2],
    }
    return EnergyResult(value, abs(lam_h2 - lam_h) / 3.0, diag)
