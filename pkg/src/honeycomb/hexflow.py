"""Symmetrization flow driving a translational tile to the regular hexagon.

The cell is repeatedly Steiner-symmetrized about the perpendicular bisector
of a short diagonal. After every step the hexagon is mirror symmetric about
the axis just used; its two sides parallel to that axis share a length ``b``
and the remaining four share a length ``a``. Vertices are relabelled so that
the ``b`` sides are AB and DE (indices 0-1 and 3-4), leaving C and F as the
apexes where two ``a`` sides meet.

Each step is checked against the three inequalities

    (i)   4 a' + 2 b' <= 4 a + 2 b
    (ii)  2 a' <= a + b
    (iii) b' <= a

and ``c = max(a, b)`` must be nonincreasing along the flow.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize_scalar

from . import _core
from .geometry import Axis, ConvexPolygon
from .steiner import chord_lengths_at
from .tiling import HexCell, regular_hexagon

INEQ_SLACK = 1e-9
AREA_TOL = 1e-10
MONOTONE_SLACK = 1e-10
SYMMETRY_TOL = 1e-9
PARALLEL_TOL = 1e-9
SIDE_TOL = 1e-9
NONDEGENERATE_TOL = 1e-10
MERGE_TOL = 1e-14
# aligned_dH <= ALIGN_CONSTANT * tol once regularity_defect < tol
ALIGN_CONSTANT = 2.0


class FlowError(RuntimeError):
    pass


class DegenerateAfterInit(FlowError):
    pass


def _area(v: np.ndarray) -> float:
    return 0.5 * float(np.dot(v[:, 0], np.roll(v[:, 1], -1)) - np.dot(np.roll(v[:, 0], -1), v[:, 1]))


def _diameter(v: np.ndarray) -> float:
    diff = v[:, None, :] - v[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", diff, diff))))


def _sides(v: np.ndarray) -> np.ndarray:
    return np.hypot(*(np.roll(v, -1, axis=0) - v).T)


def regularity_defect(v: np.ndarray) -> float:
    """(max - min) vertex distance to the centre plus (max - min) side; zero iff regular."""
    r = np.hypot(*(v - v.mean(axis=0)).T)
    s = _sides(v)
    return float(r.max() - r.min() + s.max() - s.min())


def aligned_hausdorff(v: np.ndarray, target_area: float, grid: int = 24) -> float:
    """Hausdorff distance to the regular hexagon of ``target_area`` modulo rigid motion.

    The cell is translated to put its vertex centroid at the origin; the
    rotation angle in [0, pi/3) is located on a coarse grid and then refined
    by bounded scalar minimisation inside the best grid bracket.
    """
    ref = regular_hexagon(target_area).vertices
    rel = np.ascontiguousarray(v - v.mean(axis=0))

    def dist(phi: float) -> float:
        c, s = math.cos(phi), math.sin(phi)
        rot = np.array([[c, s], [-s, c]])
        return _core.hausdorff(np.ascontiguousarray(rel @ rot), ref)

    period = math.pi / 3.0
    step = period / grid
    phis = np.arange(grid) * step
    values = [dist(p) for p in phis]
    k = int(np.argmin(values))
    res = minimize_scalar(dist, bounds=(phis[k] - step, phis[k] + step), method="bounded",
                          options={"xatol": 1e-13})
    return float(min(res.fun, values[k]))


@dataclass
class FlowState:
    n: int
    cell: HexCell
    a: float
    b: float
    axis_used: Axis
    regularity_defect: float
    aligned_dH: float
    area: float
    perimeter: float
    symmetry_defect: float
    degenerate: bool = False
    diagonal: str = ""

    @property
    def c(self) -> float:
        return max(self.a, self.b)

    @property
    def d(self) -> float:
        return min(self.a, self.b)

    def row(self) -> dict:
        return {
            "n": self.n, "a": self.a, "b": self.b, "c": self.c, "d": self.d,
            "area": self.area, "perimeter": self.perimeter,
            "defect": self.regularity_defect, "aligned_dH": self.aligned_dH,
        }


@dataclass
class Trajectory:
    states: list[FlowState]
    converged: bool
    tol: float
    initial_area: float
    start: HexCell
    metadata: dict = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        return len(self.states)

    @property
    def final(self) -> FlowState:
        return self.states[-1]


def _symmetrize_at_vertex(v: np.ndarray, k: int):
    """Symmetrize about the perpendicular bisector of the diagonal skipping vertex ``k``.

    Returns the six output vertices in the fiber-level layout
    (X, lower pair, lower far pair, opposite, upper far pair, upper pair)
    plus the axis. The fiber levels are the parameters of vertex k, of its
    neighbours (0 by construction), of the next pair and of the opposite vertex.
    """
    p, q = v[(k - 1) % 6], v[(k + 1) % 6]
    axis = Axis.perpendicular_bisector(p, q)
    t_x = float((v[k] - axis.base) @ axis.direction)
    if t_x > 0.0:
        axis = Axis(axis.base, -axis.direction)
    t, _ = axis.parameters(v)
    levels = np.array([t[k], 0.0, 0.5 * (t[(k + 2) % 6] + t[(k - 2) % 6]), t[(k + 3) % 6]])
    poly = ConvexPolygon._trusted(v)
    ell = chord_lengths_at(poly, axis, levels)
    centre = axis.base + np.outer(levels, axis.direction)
    off = np.outer(0.5 * ell, axis.normal)
    out = np.array([
        centre[0],
        centre[1] - off[1],
        centre[2] - off[2],
        centre[3],
        centre[2] + off[2],
        centre[1] + off[1],
    ])
    extreme_chord = max(ell[0], ell[3])
    return out, axis, extreme_chord


def _relabel(w: np.ndarray, axis: Axis):
    """Rotate labels so the two sides parallel to the axis are AB and DE."""
    e = np.roll(w, -1, axis=0) - w
    length = np.hypot(*e.T)
    u = axis.direction
    with np.errstate(invalid="ignore", divide="ignore"):
        sin_angle = np.abs(e[:, 0] * u[1] - e[:, 1] * u[0]) / length
    sin_angle = np.where(length > 0.0, sin_angle, 0.0)
    pair = sin_angle[:3] + sin_angle[3:]
    i = int(np.argmin(pair))
    if max(sin_angle[i], sin_angle[i + 3]) > PARALLEL_TOL:
        raise FlowError("no pair of sides parallel to the symmetrization axis")
    return np.roll(w, -i, axis=0)


def _measure(v: np.ndarray):
    s = _sides(v)
    diam = _diameter(v)
    a_sides = s[[1, 2, 4, 5]]
    b_sides = s[[0, 3]]
    if a_sides.max() - a_sides.min() > SIDE_TOL * diam:
        raise FlowError(f"four a-sides disagree: {a_sides}")
    if b_sides.max() - b_sides.min() > SIDE_TOL * diam:
        raise FlowError(f"two b-sides disagree: {b_sides}")
    return float(a_sides.mean()), float(b_sides.mean()), diam


def _central_defect(v: np.ndarray) -> float:
    c = v.mean(axis=0)
    return float(np.max(np.hypot(*(np.roll(v, -3, axis=0) + v - 2.0 * c).T)))


def _make_state(n, w, axis, target_area, diagonal, degenerate=False) -> FlowState:
    a, b, diam = _measure(w)
    cell = HexCell(w)
    return FlowState(
        n=n, cell=cell, a=a, b=b, axis_used=axis,
        regularity_defect=regularity_defect(w),
        aligned_dH=aligned_hausdorff(w, target_area),
        area=_area(w), perimeter=float(_sides(w).sum()),
        symmetry_defect=_central_defect(w) / diam,
        degenerate=degenerate or bool(np.min(_sides(w)) < 1e-12 * diam),
        diagonal=diagonal,
    )


def _nondegenerate(w: np.ndarray) -> bool:
    e = np.roll(w, -1, axis=0) - w
    en = np.roll(e, -1, axis=0)
    tri = 0.5 * np.abs(e[:, 0] * en[:, 1] - e[:, 1] * en[:, 0])
    return bool(np.all(tri > NONDEGENERATE_TOL * abs(_area(w))))


_LABELS = "ABCDEF"


def _diagonal_name(k: int, n: int) -> str:
    ends = sorted(((k - 1) % 6, (k + 1) % 6))
    return "".join(f"{_LABELS[i]}{n}" for i in ends)


def init_step(h0: HexCell, target_area: float | None = None) -> FlowState:
    """First symmetrization, about the bisector of diagonal A0E0 (skipping F0).

    Falls back to diagonal B0F0 (skipping A0) when the first choice leaves a
    degenerate hexagon.
    """
    v = np.asarray(h0.vertices, dtype=float)
    target = _area(v) if target_area is None else target_area
    for k in (5, 0):
        w, axis, _ = _symmetrize_at_vertex(v, k)
        if not _nondegenerate(w):
            continue
        w = _relabel(w, axis)
        diag = _diagonal_name(k, 0)
        return _make_state(1, w, axis, target, diag)
    raise DegenerateAfterInit("degenerate after init")


def choose_vertex(state: FlowState) -> int:
    """Index of the vertex whose neighbours define the next diagonal.

    Candidates are A, B, D, E (one ``a`` side and one ``b`` side each).
    Normally A (smallest index) is used; when ``a`` and ``b`` agree within
    tolerance the candidate farthest from the centre wins.
    """
    v = state.cell.vertices
    diam = _diameter(v)
    candidates = [0, 1, 3, 4]
    if abs(state.a - state.b) <= SIDE_TOL * diam:
        r = np.hypot(*(v[candidates] - v.mean(axis=0)).T)
        best = r.max()
        return next(c for c, ri in zip(candidates, r) if ri >= best - 1e-15 * diam)
    return 0


def flow_step(state: FlowState, target_area: float | None = None) -> FlowState:
    v = np.asarray(state.cell.vertices, dtype=float)
    target = state.area if target_area is None else target_area
    k = choose_vertex(state)
    w, axis, extreme = _symmetrize_at_vertex(v, k)
    diam = _diameter(w)
    degenerate = extreme > MERGE_TOL * diam
    w = _relabel(w, axis)
    diag = _diagonal_name(k, state.n)
    return _make_state(state.n + 1, w, axis, target, diag, degenerate)


def run_flow(h0: HexCell, tol: float = 1e-8, max_iter: int = 500) -> Trajectory:
    """Iterate until regularity_defect < tol and |a - b| < tol * diam, or max_iter states."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    target = _area(np.asarray(h0.vertices))
    state = init_step(h0, target)
    states = [state]

    def done(s: FlowState) -> bool:
        return s.regularity_defect < tol and abs(s.a - s.b) < tol * _diameter(s.cell.vertices)

    converged = done(state)
    while not converged and len(states) < max_iter:
        state = flow_step(state, target)
        states.append(state)
        converged = done(state)
    meta = {"initial_diagonal": states[0].diagonal, "align_constant": ALIGN_CONSTANT}
    return Trajectory(states, converged, tol, target, h0, meta)


@dataclass
class LemmaReport:
    ineq_i: list[bool]
    ineq_ii: list[bool]
    ineq_iii: list[bool]
    c_monotone: list[bool]
    area_ok: list[bool]
    symmetry_ok: list[bool]
    cd_gap: dict
    worst: dict
    history: list[dict]

    @property
    def passed(self) -> bool:
        return (
            all(self.ineq_i) and all(self.ineq_ii) and all(self.ineq_iii)
            and all(self.c_monotone) and all(self.area_ok) and all(self.symmetry_ok)
            and all(v["ok"] for v in self.cd_gap.values())
        )

    def violations(self) -> dict:
        return {
            "i": self.ineq_i.count(False),
            "ii": self.ineq_ii.count(False),
            "iii": self.ineq_iii.count(False),
            "c_monotone": self.c_monotone.count(False),
            "area": self.area_ok.count(False),
            "symmetry": self.symmetry_ok.count(False),
            "cd_gap": sum(not v["ok"] for v in self.cd_gap.values()),
        }

    def to_dict(self, history: bool = True) -> dict:
        out = {
            "pass": self.passed,
            "checks": {
                "i": self.ineq_i, "ii": self.ineq_ii, "iii": self.ineq_iii,
                "c_monotone": self.c_monotone, "area": self.area_ok,
                "central_symmetry": self.symmetry_ok,
            },
            "cd_gap": self.cd_gap,
            "worst_slack": self.worst,
            "violations": self.violations(),
        }
        if history:
            out["history"] = self.history
        return out


def lemma_report(traj: Trajectory) -> LemmaReport:
    """Check the step inequalities, c-monotonicity, invariants and the c/d gap.

    Slacks are "allowed minus observed", so negative values are violations.
    The gap check: with c the final c value, for eps in {1e-2, 1e-4}, every
    n with c_n <= c + eps must have max(d_n, d_{n+1}) >= c - eps.
    """
    st = traj.states
    if not st:
        raise ValueError("empty trajectory")
    a = np.array([s.a for s in st])
    b = np.array([s.b for s in st])
    c = np.maximum(a, b)
    d = np.minimum(a, b)
    s1 = (4 * a[:-1] + 2 * b[:-1]) - (4 * a[1:] + 2 * b[1:])
    s2 = (a[:-1] + b[:-1]) - 2 * a[1:]
    s3 = a[:-1] - b[1:]
    sc = c[:-1] - c[1:]
    drift = np.array([abs(s.area - traj.initial_area) / traj.initial_area for s in st])
    sym = np.array([s.symmetry_defect for s in st])

    cd_gap = {}
    c_final = c[-1]
    for eps in (1e-2, 1e-4):
        worst = math.inf
        for n in range(len(st) - 1):
            if c[n] <= c_final + eps:
                worst = min(worst, max(d[n], d[n + 1]) - (c_final - eps - INEQ_SLACK))
        cd_gap[f"{eps:g}"] = {"ok": bool(worst >= 0.0), "worst_slack": None if math.isinf(worst) else float(worst)}

    def _min(x):
        return float(x.min()) if len(x) else None

    worst = {
        "i": _min(s1), "ii": _min(s2), "iii": _min(s3), "c_monotone": _min(sc),
        "area_drift": float(drift.max()), "symmetry_defect": float(sym.max()),
    }
    return LemmaReport(
        ineq_i=[bool(x >= -INEQ_SLACK) for x in s1],
        ineq_ii=[bool(x >= -INEQ_SLACK) for x in s2],
        ineq_iii=[bool(x >= -INEQ_SLACK) for x in s3],
        c_monotone=[bool(x >= -MONOTONE_SLACK) for x in sc],
        area_ok=[bool(x < AREA_TOL) for x in drift],
        symmetry_ok=[bool(x < SYMMETRY_TOL) for x in sym],
        cd_gap=cd_gap,
        worst=worst,
        history=[{"n": s.n, "a": s.a, "b": s.b, "c": s.c, "d": s.d} for s in st],
    )


def inflate_b(traj: Trajectory, index: int = -1, factor: float = 1.01) -> Trajectory:
    """Copy of ``traj`` with one state's b scaled by ``factor`` (fault injection)."""
    states = list(traj.states)
    states[index] = replace(states[index], b=states[index].b * factor)
    return replace(traj, states=states)


CSV_COLUMNS = ["n", "a", "b", "c", "d", "area", "perimeter", "defect", "aligned_dH"]


def _fmt(x) -> str:
    return str(x) if isinstance(x, (int, np.integer)) else format(float(x), ".17g")


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for s in traj.states:
        row = s.row()
        writer.writerow([_fmt(row[k]) for k in CSV_COLUMNS])
    return buf.getvalue()


def report_json(report: LemmaReport, **kw) -> str:
    return json.dumps(report.to_dict(**kw), indent=2, sort_keys=True)
