"""Convex polygon primitives.

Polygons are immutable and always stored counterclockwise. Collinear vertex
triples are allowed because degenerate hexagons (parallelograms with inserted
edge points) are first-class citizens of the flow; strict convexity is a
separate query. Tolerances are relative to the polygon diameter.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull

from . import _core

GEOM_TOL = 1e-12


class NotInteriorError(ValueError):
    """Raised when a query point is outside or on the boundary of a polygon."""


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _turns(v: np.ndarray) -> np.ndarray:
    e = np.roll(v, -1, axis=0) - v
    en = np.roll(e, -1, axis=0)
    return e[:, 0] * en[:, 1] - e[:, 1] * en[:, 0]


def _total_turning(v: np.ndarray) -> float:
    e = np.roll(v, -1, axis=0) - v
    en = np.roll(e, -1, axis=0)
    return float(np.sum(np.arctan2(_turns(v), np.einsum("ij,ij->i", e, en))))


def _diameter(v: np.ndarray) -> float:
    diff = v[:, None, :] - v[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", diff, diff))))


class ConvexPolygon:
    """A convex polygon with nonempty interior, vertices in CCW order.

    Clockwise input is reversed. Input that is not convex in the given cyclic
    order (including self-intersecting orderings) raises ``ValueError``.
    """

    __slots__ = ("_v", "_diam")

    def __init__(self, vertices, tol: float = GEOM_TOL):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError("vertices must be an (n, 2) array")
        if len(v) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        diam = _diameter(v)
        if diam == 0.0:
            raise ValueError("degenerate polygon")
        sep = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
        if np.any(sep <= tol * diam):
            raise ValueError("consecutive vertices coincide")
        area = _signed_area(v)
        if area < 0:
            v = v[::-1].copy()
            area = -area
        if area <= tol * diam * diam:
            raise ValueError("polygon has no interior")
        # left turns alone admit star orderings; those wind more than once
        if np.any(_turns(v) < -tol * diam * diam) or _total_turning(v) > 3.0 * np.pi:
            raise ValueError("vertices do not form a convex polygon in cyclic order")
        v.setflags(write=False)
        self._v = v
        self._diam = diam

    @classmethod
    def _trusted(cls, v: np.ndarray) -> "ConvexPolygon":
        obj = cls.__new__(cls)
        v = np.array(v, dtype=float)
        v.setflags(write=False)
        obj._v = v
        obj._diam = _diameter(v)
        return obj

    @classmethod
    def hull(cls, points) -> "ConvexPolygon":
        """Convex hull of a point cloud (collinear hull points dropped)."""
        pts = np.asarray(points, dtype=float)
        hull = ConvexHull(pts)
        return cls(pts[hull.vertices])

    @property
    def vertices(self) -> np.ndarray:
        return self._v

    @property
    def diameter(self) -> float:
        return self._diam

    def __len__(self) -> int:
        return len(self._v)

    def __repr__(self) -> str:
        return f"ConvexPolygon({self._v.tolist()!r})"

    def translated(self, offset) -> "ConvexPolygon":
        return ConvexPolygon._trusted(self._v + np.asarray(offset, dtype=float))

    def scaled(self, factor: float, about=(0.0, 0.0)) -> "ConvexPolygon":
        c = np.asarray(about, dtype=float)
        return ConvexPolygon._trusted(c + factor * (self._v - c))

    def rotated(self, angle: float, about=(0.0, 0.0)) -> "ConvexPolygon":
        c = np.asarray(about, dtype=float)
        ca, sa = math.cos(angle), math.sin(angle)
        rot = np.array([[ca, -sa], [sa, ca]])
        return ConvexPolygon._trusted(c + (self._v - c) @ rot.T)

    def to_dict(self) -> dict:
        return {"vertices": [[float(x), float(y)] for x, y in self._v]}

    @classmethod
    def from_dict(cls, data: dict) -> "ConvexPolygon":
        try:
            verts = data["vertices"]
        except (KeyError, TypeError) as exc:
            raise ValueError("polygon JSON needs a 'vertices' list") from exc
        return cls(verts)


def load_polygon(path) -> ConvexPolygon:
    return ConvexPolygon.from_dict(json.loads(Path(path).read_text()))


def dump_polygon(poly: ConvexPolygon, path) -> None:
    Path(path).write_text(json.dumps(poly.to_dict()) + "\n")


@dataclass(frozen=True)
class Axis:
    """Oriented line ``base + t*direction``; ``normal`` is direction rotated +90 degrees."""

    base: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float).reshape(2)
        u = np.asarray(self.direction, dtype=float).reshape(2)
        norm = math.hypot(u[0], u[1])
        if norm == 0.0 or not np.all(np.isfinite(u)):
            raise ValueError("axis direction must be a nonzero finite vector")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", u / norm)

    @property
    def normal(self) -> np.ndarray:
        return np.array([-self.direction[1], self.direction[0]])

    @classmethod
    def through(cls, p, q) -> "Axis":
        p = np.asarray(p, dtype=float)
        return cls(p, np.asarray(q, dtype=float) - p)

    @classmethod
    def perpendicular_bisector(cls, p, q) -> "Axis":
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        d = q - p
        return cls(0.5 * (p + q), np.array([-d[1], d[0]]))

    def parameters(self, points) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates (along axis, along normal) of points in the axis frame."""
        rel = np.asarray(points, dtype=float) - self.base
        return rel @ self.direction, rel @ self.normal

    def reflect(self, points) -> np.ndarray:
        t, s = self.parameters(points)
        return self.base + np.outer(t, self.direction) - np.outer(s, self.normal)


def area(P: ConvexPolygon) -> float:
    return _signed_area(P.vertices)


def perimeter(P: ConvexPolygon) -> float:
    v = P.vertices
    return float(np.sum(np.hypot(*(np.roll(v, -1, axis=0) - v).T)))


def centroid(P: ConvexPolygon) -> np.ndarray:
    """Area centroid."""
    v = P.vertices
    vn = np.roll(v, -1, axis=0)
    cross = v[:, 0] * vn[:, 1] - vn[:, 0] * v[:, 1]
    a = 0.5 * cross.sum()
    return ((v + vn) * cross[:, None]).sum(axis=0) / (6.0 * a)


def edge_normals(P: ConvexPolygon) -> tuple[np.ndarray, np.ndarray]:
    """Outward unit normals and offsets so that P = {x : n_i . x <= c_i}."""
    v = P.vertices
    e = np.roll(v, -1, axis=0) - v
    n = np.column_stack([e[:, 1], -e[:, 0]])
    n /= np.hypot(n[:, 0], n[:, 1])[:, None]
    return n, np.einsum("ij,ij->i", n, v)


def contains(P: ConvexPolygon, x, tol: float = 0.0) -> np.ndarray | bool:
    """Closed containment test, optionally shrunk (tol>0) or grown (tol<0) by tol*diameter."""
    n, c = edge_normals(P)
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    inside = np.all(pts @ n.T <= c[None, :] - tol * P.diameter, axis=1)
    return bool(inside[0]) if np.ndim(x) == 1 else inside


def signed_distances(P: ConvexPolygon, x) -> np.ndarray:
    """Distances from points to every edge line (positive inside)."""
    n, c = edge_normals(P)
    return c[None, :] - np.atleast_2d(np.asarray(x, dtype=float)) @ n.T


def is_strictly_convex(P: ConvexPolygon, tol: float = GEOM_TOL) -> bool:
    return bool(np.all(_turns(P.vertices) > tol * P.diameter**2))


def hausdorff_distance(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    """Hausdorff distance; exact for convex polygons (extreme points suffice)."""
    return float(_core.hausdorff(P.vertices, Q.vertices))


def intersect_convex(P: ConvexPolygon, Q: ConvexPolygon) -> ConvexPolygon | None:
    """Intersection by clipping P against the half-planes of Q; ``None`` when empty.

    Near-tangent contacts with intersection area below 1e-12 count as empty.
    """
    out = [tuple(p) for p in P.vertices]
    n, c = edge_normals(Q)
    for ni, ci in zip(n, c):
        if not out:
            break
        pts = np.array(out)
        val = ci - pts @ ni
        clipped = []
        m = len(pts)
        for k in range(m):
            cur, nxt = pts[k], pts[(k + 1) % m]
            vc, vn = val[k], val[(k + 1) % m]
            if vc >= 0.0:
                clipped.append(tuple(cur))
            if (vc >= 0.0) != (vn >= 0.0):
                lam = vc / (vc - vn)
                clipped.append(tuple(cur + lam * (nxt - cur)))
        out = clipped
    if len(out) < 3:
        return None
    v = np.array(out)
    scale = max(P.diameter, Q.diameter)
    keep = np.hypot(*(np.roll(v, -1, axis=0) - v).T) > GEOM_TOL * scale
    v = v[keep]
    if len(v) < 3 or _signed_area(v) < 1e-12:
        return None
    return ConvexPolygon._trusted(v)


def ray_exit_distance(P: ConvexPolygon, x, theta: float) -> float:
    """Distance from interior point ``x`` to the boundary along direction ``theta``."""
    x = np.asarray(x, dtype=float)
    if np.min(signed_distances(P, x)) <= GEOM_TOL * P.diameter:
        raise NotInteriorError("point not interior")
    return float(_core.ray_exit(P.vertices, x[None, :], np.array([theta]))[0])


def is_centrally_symmetric(P: ConvexPolygon, tol: float = 1e-9) -> tuple[bool, np.ndarray]:
    """(flag, center) with center the vertex centroid."""
    v = P.vertices
    center = v.mean(axis=0)
    n = len(v)
    if n % 2:
        return False, center
    opposite = np.roll(v, -(n // 2), axis=0)
    defect = np.max(np.hypot(*(opposite + v - 2.0 * center).T))
    return bool(defect <= tol * P.diameter), center


def symmetry_defect(P: ConvexPolygon) -> float:
    """max_i |v_{i+n/2} + v_i - 2c| / diameter (inf for odd vertex counts)."""
    v = P.vertices
    n = len(v)
    if n % 2:
        return math.inf
    c = v.mean(axis=0)
    return float(np.max(np.hypot(*(np.roll(v, -(n // 2), axis=0) + v - 2.0 * c).T)) / P.diameter)


def regular_polygon(n: int, circumradius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> ConvexPolygon:
    k = np.arange(n)
    ang = phase + 2.0 * np.pi * k / n
    c = np.asarray(center, dtype=float)
    return ConvexPolygon(c + circumradius * np.column_stack([np.cos(ang), np.sin(ang)]))


def rectangle(x0: float, y0: float, x1: float, y1: float) -> ConvexPolygon:
    return ConvexPolygon([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
