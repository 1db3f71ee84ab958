"""Convex polygons that tile the plane by translations.

Such a polygon is a centrally symmetric hexagon or a parallelogram. Both are
carried as six labelled vertices; a parallelogram gets the midpoints of its
first and fourth sides inserted, which makes it a degenerate hexagon.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .geometry import (
    GEOM_TOL,
    ConvexPolygon,
    area,
    contains,
    intersect_convex,
    signed_distances,
)

CENTRAL_TOL = 1e-10


class SamplerError(RuntimeError):
    pass


class TileClass(enum.Enum):
    CENTRALLY_SYMMETRIC_HEXAGON = "CentrallySymmetricHexagon"
    PARALLELOGRAM = "Parallelogram"
    NOT_A_TILE = "NotATile"


def _diameter(v: np.ndarray) -> float:
    diff = v[:, None, :] - v[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", diff, diff))))


@dataclass(frozen=True)
class HexCell:
    """Six labelled CCW vertices, centrally symmetric about ``center``.

    A zero-length side is tolerated (transient flow degeneracy), so the raw
    vertex array is kept alongside the polygon view.
    """

    vertices: np.ndarray
    center: np.ndarray = field(init=False)
    degenerate: bool = field(init=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.shape != (6, 2):
            raise ValueError("a HexCell has exactly six vertices")
        center = v.mean(axis=0)
        diam = _diameter(v)
        defect = np.max(np.hypot(*(np.roll(v, -3, axis=0) + v - 2.0 * center).T))
        if defect > CENTRAL_TOL * diam:
            raise ValueError(f"cell is not centrally symmetric (defect {defect:.3e})")
        e = np.roll(v, -1, axis=0) - v
        en = np.roll(e, -1, axis=0)
        turns = e[:, 0] * en[:, 1] - e[:, 1] * en[:, 0]
        if 0.5 * np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]) <= 0.0:
            raise ValueError("cell vertices must be counterclockwise with positive area")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "degenerate", bool(np.any(np.abs(turns) <= 1e-10 * diam * diam)))

    @property
    def poly(self) -> ConvexPolygon:
        v = self.vertices
        keep = np.hypot(*(np.roll(v, -1, axis=0) - v).T) > GEOM_TOL * _diameter(v)
        return ConvexPolygon(v[keep])

    @property
    def side_lengths(self) -> np.ndarray:
        v = self.vertices
        return np.hypot(*(np.roll(v, -1, axis=0) - v).T)

    @classmethod
    def from_polygon(cls, P: ConvexPolygon) -> "HexCell":
        if len(P) == 6:
            return cls(P.vertices)
        if len(P) == 4:
            return from_parallelogram(*P.vertices)
        raise ValueError("only hexagons and parallelograms tile by translations")


@dataclass(frozen=True)
class LatticeBasis:
    t1: np.ndarray
    t2: np.ndarray

    @property
    def det(self) -> float:
        return float(self.t1[0] * self.t2[1] - self.t1[1] * self.t2[0])

    def translation(self, m: int, n: int) -> np.ndarray:
        return m * self.t1 + n * self.t2


@dataclass
class TilingReport:
    det_residual: float
    max_overlap: float
    coverage: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "det_residual": self.det_residual,
            "max_overlap": self.max_overlap,
            "coverage": self.coverage,
            "pass": self.passed,
        }


def regular_hexagon(target_area: float = 1.0) -> HexCell:
    """Regular hexagon centred at the origin with a vertex on the positive x-axis."""
    if not target_area > 0:
        raise ValueError("target area must be positive")
    side = math.sqrt(2.0 * target_area / (3.0 * math.sqrt(3.0)))
    ang = np.arange(6) * (np.pi / 3.0)
    return HexCell(side * np.column_stack([np.cos(ang), np.sin(ang)]))


def hexagon_side(target_area: float) -> float:
    return math.sqrt(2.0 * target_area / (3.0 * math.sqrt(3.0)))


def from_parallelogram(p1, p2, p3, p4) -> HexCell:
    """Degenerate cell (p1, mid(p1,p2), p2, p3, mid(p3,p4), p4)."""
    p = [np.asarray(q, dtype=float) for q in (p1, p2, p3, p4)]
    diam = max(np.linalg.norm(a - b) for a in p for b in p)
    if np.linalg.norm((p[2] - p[1]) - (p[3] - p[0])) > 1e-10 * diam:
        raise ValueError("points do not form a parallelogram")
    e1, e2 = p[1] - p[0], p[3] - p[0]
    if e1[0] * e2[1] - e1[1] * e2[0] <= 1e-12 * diam * diam:
        raise ValueError("parallelogram must be nondegenerate and counterclockwise")
    # opposite side from the exact same vector keeps central symmetry exact
    v = np.array([p[0], p[0] + 0.5 * e1, p[1], p[1] + e2, p[1] + e2 - 0.5 * e1, p[0] + e2])
    return HexCell(v)


def _effective_vertices(P: ConvexPolygon, tol: float) -> np.ndarray:
    v = P.vertices
    diam = P.diameter
    e_in = v - np.roll(v, 1, axis=0)
    e_out = np.roll(v, -1, axis=0) - v
    cross = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
    norms = np.hypot(*e_in.T) * np.hypot(*e_out.T)
    return v[np.abs(cross) > tol * norms + 1e-300 * diam]


def classify(P: ConvexPolygon, tol: float = 1e-9) -> TileClass:
    v = _effective_vertices(P, tol)
    n = len(v)
    if n not in (4, 6):
        return TileClass.NOT_A_TILE
    c = v.mean(axis=0)
    defect = np.max(np.hypot(*(np.roll(v, -(n // 2), axis=0) + v - 2.0 * c).T))
    if defect > tol * P.diameter:
        return TileClass.NOT_A_TILE
    return TileClass.PARALLELOGRAM if n == 4 else TileClass.CENTRALLY_SYMMETRIC_HEXAGON


def _cell_vertices(cell) -> np.ndarray:
    return cell.vertices if isinstance(cell, (HexCell, ConvexPolygon)) else np.asarray(cell, dtype=float)


def lattice_vectors(cell) -> LatticeBasis:
    """Translation generators v0 - v2 and v1 - v3 of a six-vertex cell."""
    v = _cell_vertices(cell)
    basis = LatticeBasis(v[0] - v[2], v[1] - v[3])
    if abs(basis.det) < 1e-12 * _diameter(v) ** 2:
        raise ValueError("cell does not span a lattice")
    return basis


def lattice_offsets(rings: int) -> list[tuple[int, int]]:
    return [(m, n) for m in range(-rings, rings + 1) for n in range(-rings, rings + 1)]


def hex_ring_offsets(rings: int) -> list[tuple[int, int]]:
    """Lattice index pairs within hexagonal (neighbour-graph) distance ``rings``.

    Neighbours of a cell are +-t1, +-t2 and +-(t2 - t1).
    """
    out = []
    for m in range(-rings, rings + 1):
        for n in range(-rings, rings + 1):
            # coordinates in the neighbour basis where t2 - t1 is a unit step
            if max(abs(m), abs(n), abs(m + n)) <= rings:
                out.append((m, n))
    return out


def verify_tiling(cell, rings: int = 2, probes: int = 10_000, seed: int = 0) -> TilingReport:
    """Numerical tiling witness: lattice determinant, translate overlaps, probe coverage.

    Accepts a HexCell or any six-vertex ConvexPolygon so that non-tiles can
    be examined; failures are reported, never raised.
    """
    if rings < 1:
        raise ValueError("rings must be >= 1")
    v = _cell_vertices(cell)
    poly = cell.poly if isinstance(cell, HexCell) else ConvexPolygon(v)
    cell_area = area(poly)
    basis = LatticeBasis(v[0] - v[2], v[1] - v[3])
    det_residual = abs(abs(basis.det) - cell_area) / cell_area

    max_overlap = 0.0
    for m, n in lattice_offsets(rings):
        if m == 0 and n == 0:
            continue
        shift = basis.translation(m, n)
        if np.linalg.norm(shift) > 2.0 * poly.diameter:
            continue
        inter = intersect_convex(poly, poly.translated(shift))
        if inter is not None:
            max_overlap = max(max_overlap, area(inter))

    # probe a fundamental parallelogram centred on the cell
    center = v.mean(axis=0)
    unit = qmc.Halton(d=2, scramble=True, seed=seed).random(probes) - 0.5
    pts = center + unit[:, :1] * basis.t1 + unit[:, 1:] * basis.t2
    hits = np.zeros(probes, dtype=int)
    grazing = np.zeros(probes, dtype=bool)
    for m, n in lattice_offsets(max(rings, 1)):
        shifted = pts - basis.translation(m, n)
        dist = signed_distances(poly, shifted)
        grazing |= np.any(np.abs(dist) <= 1e-9, axis=1) & np.all(dist >= -1e-9, axis=1)
        hits += np.all(dist > 0.0, axis=1)
    valid = ~grazing
    coverage = float(np.mean(hits[valid] == 1)) if valid.any() else 0.0
    passed = det_residual < 1e-10 and max_overlap < 1e-10 * cell_area and coverage == 1.0
    return TilingReport(det_residual, max_overlap, coverage, passed)


def sample_random(seed: int, min_turn: float = 1e-3) -> HexCell:
    """Random unit-area centrally symmetric hexagon, deterministic in ``seed``.

    Half-vertices p1, p2, p3 have sorted polar angles in (0, pi) and radii in
    [0.5, 1.5]; draws whose turning angles fall below ``min_turn`` are rejected.
    """
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        ang = np.sort(rng.uniform(0.0, np.pi, 3))
        rad = rng.uniform(0.5, 1.5, 3)
        half = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        v = np.vstack([half, -half])
        e = np.roll(v, -1, axis=0) - v
        en = np.roll(e, -1, axis=0)
        turn = np.arctan2(e[:, 0] * en[:, 1] - e[:, 1] * en[:, 0], np.einsum("ij,ij->i", e, en))
        if np.all(turn > min_turn):
            a = 0.5 * np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
            return HexCell(v / math.sqrt(a))
    raise SamplerError("sampler failed")


def sample_parallelogram(seed: int) -> HexCell:
    """Random unit-area parallelogram cell (degenerate hexagon), deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        ang = rng.uniform(0.0, np.pi)
        gap = rng.uniform(0.15 * np.pi, 0.85 * np.pi)
        r1, r2 = rng.uniform(0.5, 1.5, 2)
        e1 = r1 * np.array([math.cos(ang), math.sin(ang)])
        e2 = r2 * np.array([math.cos(ang + gap), math.sin(ang + gap)])
        det = e1[0] * e2[1] - e1[1] * e2[0]
        if det > 1e-3:
            s = 1.0 / math.sqrt(det)
            e1, e2 = s * e1, s * e2
            p1 = -0.5 * (e1 + e2)
            return from_parallelogram(p1, p1 + e1, p1 + e1 + e2, p1 + e2)
    raise SamplerError("sampler failed")
