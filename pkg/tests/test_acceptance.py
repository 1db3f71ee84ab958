"""Acceptance suite: one test and one PASS/FAIL summary line per criterion."""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import random_axis, random_polygon
from honeycomb.cli import main, mix
from honeycomb.energies import (
    FunctionalSpec,
    KernelSpec,
    cheeger_constant,
    dirichlet_lambda1,
    evaluate,
    interior_interaction,
    log_capacity,
    nonlocal_perimeter,
    radial_potential,
)
from honeycomb.geometry import (
    Axis,
    _turns,
    area,
    centroid,
    hausdorff_distance,
    load_polygon,
    perimeter,
    rectangle,
)
from honeycomb.hexflow import flow_step, init_step
from honeycomb.steiner import reflection_defect, steiner_symmetrize
from honeycomb.tiling import (
    TileClass,
    classify,
    lattice_vectors,
    regular_hexagon,
    sample_parallelogram,
    sample_random,
    verify_tiling,
)

pytestmark = pytest.mark.acceptance

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: list[str] = []


def record(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


# 1. Steiner operator suite -------------------------------------------------

# relative area is only meaningful above the float64 floor eps * |x| * perimeter / area;
# slivers thinner than this are redrawn and counted
MIN_FATNESS = 1e-3


def _fat_pair(rng):
    rejected = 0
    while True:
        P = random_polygon(rng)
        if area(P) >= MIN_FATNESS * P.diameter**2:
            return P, random_axis(rng, P), rejected
        rejected += 1


def test_criterion_1_steiner_suite():
    rng = np.random.default_rng(20240601)
    draws = [_fat_pair(rng) for _ in range(10_000)]
    slivers = sum(r for _, _, r in draws)
    worst = dict(area=0.0, perimeter=0.0, symmetry=0.0, idempotence=0.0, concave_turn=0.0)
    t0 = time.perf_counter()
    for P, axis, _ in draws:
        S = steiner_symmetrize(P, axis)
        diam = P.diameter
        worst["area"] = max(worst["area"], abs(area(S) - area(P)) / area(P))
        worst["perimeter"] = max(worst["perimeter"], (perimeter(S) - perimeter(P)) / perimeter(P))
        worst["symmetry"] = max(worst["symmetry"], reflection_defect(S, axis) / diam)
        worst["idempotence"] = max(worst["idempotence"],
                                   hausdorff_distance(S, steiner_symmetrize(S, axis)) / diam)
        worst["concave_turn"] = max(worst["concave_turn"], -float(_turns(S.vertices).min()) / diam**2)
    elapsed = time.perf_counter() - t0
    ok = (worst["area"] < 1e-12 and worst["perimeter"] <= 1e-12 and worst["symmetry"] < 1e-12
          and worst["idempotence"] < 1e-10 and worst["concave_turn"] <= 1e-12 and elapsed < 10.0)
    detail = ", ".join(f"{k}={v:.2e}" for k, v in worst.items())
    record(1, ok, f"10^4 pairs in {elapsed:.2f}s ({slivers} slivers redrawn); worst {detail}")


# 2. Step inequalities along the flow ----------------------------------------

def test_criterion_2_verify_lemma(tmp_path):
    rep = tmp_path / "lemma.json"
    t0 = time.perf_counter()
    code = main(["verify-lemma", "--seeds", "1000", "--seed", "42", "--report", str(rep)])
    elapsed = time.perf_counter() - t0
    s = json.loads(rep.read_text())["summary"]
    steps = s["max_steps_to_defect_1e-6"]
    ok = (code == 0 and s["total_violations"] == 0 and s["flows_failed"] == 0
          and s["all_converged"]
          and s["max_area_drift"] < 1e-10
          and s["max_symmetry_defect"] < 1e-9
          and steps is not None and steps <= 200
          and s["max_final_aligned_dH"] < 1e-5
          and elapsed < 60.0)
    record(2, ok, (f"exit {code}, violations {s['total_violations']}, area drift {s['max_area_drift']:.1e}, "
                   f"symmetry {s['max_symmetry_defect']:.1e}, steps to 1e-6 <= {steps}, "
                   f"final dH {s['max_final_aligned_dH']:.1e}, {elapsed:.1f}s"))


# 3. Fixed point --------------------------------------------------------------

def test_criterion_3_fixed_point():
    state = init_step(regular_hexagon())
    worst = state.aligned_dH
    for _ in range(50):
        state = flow_step(state)
        worst = max(worst, state.aligned_dH)
    record(3, worst < 1e-10, f"max aligned dH over 50 steps {worst:.2e}")


# 4. Evaluator calibration -----------------------------------------------------

def test_criterion_4_calibration():
    checks = []
    square = rectangle(0, 0, 1, 1)

    lam = dirichlet_lambda1(square, h=0.05).value
    checks.append(("lambda1 square", abs(lam / (2 * math.pi**2) - 1), 2e-3))
    lam = dirichlet_lambda1(rectangle(0, 0, 2, 0.5), h=0.05).value
    checks.append(("lambda1 rectangle", abs(lam / (4.25 * math.pi**2) - 1), 3e-3))
    cap = log_capacity(square, 512).value
    checks.append(("logcap square", abs(cap / 0.590170 - 1), 2e-3))
    h = cheeger_constant(square).value
    checks.append(("cheeger square", abs(h - (2 + math.sqrt(math.pi))), 1e-6))
    centred = rectangle(-0.5, -0.5, 0.5, 0.5)
    pot = radial_potential(centred, [0.0, 0.0], KernelSpec.riesz_power(1.0))
    checks.append(("potential closed form", abs(pot - 4 * math.log(1 + math.sqrt(2))), 1e-10))

    # nonlocal perimeter plus self interaction is 2 pi / beta^2 times the area
    worst_ratio = 0.0
    for i in range(20):
        cell = (sample_random if i % 2 == 0 else sample_parallelogram)(mix(4, i))
        beta = 0.5 + 0.25 * (i % 7)
        K = KernelSpec.exponential(beta)
        per = nonlocal_perimeter(cell.poly, K)
        inter = interior_interaction(cell.poly, K)
        gap = abs(per.value + inter.value - 2 * math.pi / beta**2 * area(cell.poly))
        worst_ratio = max(worst_ratio, gap / (per.error_estimate + inter.error_estimate))
    checks.append(("partition identity / error budget", worst_ratio, 1.0))

    ok = all(err <= tol for _, err, tol in checks)
    record(4, ok, "; ".join(f"{name} {err:.2e} (tol {tol:g})" for name, err, tol in checks))


# 5. Monotonicity under Steiner symmetrization -----------------------------------

FUNCTIONALS = [
    "perimeter", "cheeger", "logcap", "lambda1",
    "riesz:exp:1", "riesz:power:1", "nonlocal-perimeter:exp:1", "nonlocal-perimeter:frac:0.5",
]
STRICT_TRIALS = 200
SPOT_PAIRS = 50


def _cell_axis_pair(i):
    rng = np.random.default_rng(mix(5, i))
    cell = (sample_random if i % 4 != 3 else sample_parallelogram)(mix(6, i))
    ang = rng.uniform(0, math.pi)
    return cell.poly, Axis(centroid(cell.poly), (math.cos(ang), math.sin(ang)))


def test_criterion_5_monotonicity():
    lines = []
    ok = True
    pairs = [_cell_axis_pair(i) for i in range(STRICT_TRIALS)]
    symmetrals = [steiner_symmetrize(P, ax) for P, ax in pairs]
    for name in FUNCTIONALS:
        F = FunctionalSpec.parse(name)
        trials = STRICT_TRIALS if F.strictly_monotone else SPOT_PAIRS
        increases = 0
        strict = eligible = 0
        for (P, _), S in zip(pairs[:trials], symmetrals):
            a, b = evaluate(P, F), evaluate(S, F)
            budget = a.error_estimate + b.error_estimate + F.epsilon
            increases += b.value > a.value + budget
            if F.strictly_monotone and hausdorff_distance(P, S) > 0.01 * P.diameter:
                eligible += 1
                strict += a.value - b.value > budget
        spot_ok = increases == 0
        line = f"{name}: {increases} increases"
        if F.strictly_monotone:
            rate = strict / eligible if eligible else 0.0
            spot_ok = spot_ok and rate >= 0.99
            line += f", strict {strict}/{eligible} ({100 * rate:.1f}%)"
        ok &= spot_ok
        lines.append(line)
    record(5, ok, "; ".join(lines))


# 6. Optimality scans -----------------------------------------------------------

SCANS = [
    ("perimeter", 100), ("cheeger", 100), ("riesz:exp:1", 100),
    ("nonlocal-perimeter:exp:1", 100), ("logcap", 50), ("lambda1", 25),
]


def test_criterion_6_scans(tmp_path):
    codes = {}
    t0 = time.perf_counter()
    for name, samples in SCANS:
        out = tmp_path / f"{name.replace(':', '_')}.csv"
        codes[name] = main(["scan", "--functional", name, "--samples", str(samples),
                            "--seed", "1", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    ok = all(c == 0 for c in codes.values()) and elapsed < 900.0
    record(6, ok, ", ".join(f"{k} exit {v}" for k, v in codes.items()) + f"; {elapsed:.0f}s total")


# 7. Tiling -------------------------------------------------------------------

def test_criterion_7_tiling():
    worst_det = worst_overlap = 0.0
    failures = 0
    for i in range(500):
        cell = (sample_random if i % 2 == 0 else sample_parallelogram)(mix(7, i))
        cell_area = area(cell.poly)
        det = abs(lattice_vectors(cell).det)
        rep = verify_tiling(cell, rings=2, probes=500, seed=i)
        worst_det = max(worst_det, abs(det - cell_area) / cell_area)
        worst_overlap = max(worst_overlap, rep.max_overlap / cell_area)
        failures += not rep.passed
    fixture = load_polygon(FIXTURES / "nontile.json")
    rejected = classify(fixture) is TileClass.NOT_A_TILE and not verify_tiling(fixture, rings=2).passed
    ok = worst_det < 1e-12 and worst_overlap < 1e-10 and failures == 0 and rejected
    record(7, ok, (f"500 cells: det residual {worst_det:.1e}, overlap {worst_overlap:.1e}, "
                   f"failed witnesses {failures}; non-tile rejected {rejected}"))
