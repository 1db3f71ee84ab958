"""Command-line entry point.

Exit codes: 0 success, 1 verification failed, 2 invalid input,
3 non-convergence.

Sample ``i`` of a run seeded with ``S`` uses the derived seed ``mix(S, i)``,
the splitmix64 finalizer applied to ``S + (i + 1) * 0x9E3779B97F4A7C15``
(all arithmetic mod 2^64).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .energies import FunctionalSpec, KernelNotAdmissible, evaluate
from .energies.fem import ConvergenceError
from .geometry import ConvexPolygon, load_polygon
from .hexflow import (
    FlowError,
    inflate_b,
    lemma_report,
    run_flow,
    trajectory_csv,
)
from .render import flow_svg, tiling_svg
from .tiling import (
    HexCell,
    TileClass,
    classify,
    from_parallelogram,
    hex_ring_offsets,
    regular_hexagon,
    sample_parallelogram,
    sample_random,
    verify_tiling,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_NONCONVERGED = 3

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1
DEFECT_TARGET = 1e-6


class InvalidInput(Exception):
    pass


def mix(seed: int, index: int) -> int:
    z = (seed + (index + 1) * GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def worker_count() -> int:
    raw = os.environ.get("HEXFLOW_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise InvalidInput(f"HEXFLOW_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InvalidInput(f"HEXFLOW_THREADS must be a positive integer, got {raw!r}")
    return n


def _map(fn, items: list) -> list:
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _parse_points(text: str) -> list[np.ndarray]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise InvalidInput(f"bad point list {text!r}") from None
    if len(vals) != 8:
        raise InvalidInput("parallelogram needs four points (8 numbers)")
    return [np.array(vals[i:i + 2]) for i in range(0, 8, 2)]


def cell_from_args(args) -> HexCell:
    if (args.input is None) == (args.kind is None):
        raise InvalidInput("give exactly one of --input or --kind")
    try:
        if args.input is not None:
            try:
                poly = load_polygon(args.input)
            except (OSError, json.JSONDecodeError) as exc:
                raise InvalidInput(f"cannot read {args.input}: {exc}") from None
            return HexCell.from_polygon(poly)
        name, _, rest = args.kind.partition(":")
        if name == "regular" and not rest:
            return regular_hexagon()
        if name == "random":
            return sample_random(int(rest))
        if name == "parallelogram":
            return from_parallelogram(*_parse_points(rest))
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    raise InvalidInput(f"unknown --kind {args.kind!r}")


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _hstar_like(v: np.ndarray, area_: float) -> np.ndarray:
    ref = regular_hexagon(area_).vertices
    c = v.mean(axis=0)
    phi = math.atan2(v[0, 1] - c[1], v[0, 0] - c[0])
    rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    return c + ref @ rot.T


def cmd_symmetrize(args) -> int:
    cell = cell_from_args(args)
    traj = run_flow(cell, tol=args.tol, max_iter=args.max_iter)
    if args.out:
        _write(args.out, trajectory_csv(traj))
    if args.svg:
        st = traj.states
        layers = [("H_0", cell.vertices), ("H_1", st[0].cell.vertices)]
        layers.append((f"H_{traj.iterations}", traj.final.cell.vertices))
        layers.append(("H*", _hstar_like(traj.final.cell.vertices, traj.initial_area)))
        _write(args.svg, flow_svg(layers, __version__))
    f = traj.final
    print(f"states={traj.iterations} converged={traj.converged} a={f.a:.17g} b={f.b:.17g} "
          f"defect={f.regularity_defect:.3e} aligned_dH={f.aligned_dH:.3e}")
    return EXIT_OK if traj.converged else EXIT_NONCONVERGED


def _lemma_job(job: tuple[int, int, float, int, str | None]) -> dict:
    index, seed, tol, max_iter, fault = job
    cell = sample_random(seed) if index % 2 == 0 else sample_parallelogram(seed)
    try:
        traj = run_flow(cell, tol=tol, max_iter=max_iter)
    except FlowError as exc:
        return {"index": index, "seed": seed, "error": str(exc)}
    if fault == "inflate-b":
        traj = inflate_b(traj)
    rep = lemma_report(traj)
    reached = next((s.n for s in traj.states if s.regularity_defect < DEFECT_TARGET), None)
    return {
        "index": index,
        "seed": seed,
        "start": "hexagon" if index % 2 == 0 else "parallelogram",
        "converged": traj.converged,
        "states": traj.iterations,
        "steps_to_defect_1e-6": reached,
        "final_aligned_dH": traj.final.aligned_dH,
        "initial_diagonal": traj.metadata.get("initial_diagonal"),
        "passed": rep.passed,
        "violations": rep.violations(),
        "worst": rep.worst,
        "cd_gap": rep.cd_gap,
        "history": rep.history,
    }


def _worst(values):
    vals = [v for v in values if v is not None]
    return min(vals) if vals else None


def cmd_verify_lemma(args) -> int:
    if args.seeds < 1:
        raise InvalidInput("--seeds must be >= 1")
    jobs = [(i, mix(args.seed, i), args.tol, args.max_iter, args.fault) for i in range(args.seeds)]
    flows = sorted(_map(_lemma_job, jobs), key=lambda r: r["index"])
    errors = [f for f in flows if "error" in f]
    ok = [f for f in flows if "error" not in f]
    violations = {}
    for f in ok:
        for k, v in f["violations"].items():
            violations[k] = violations.get(k, 0) + v
    summary = {
        "seeds": args.seeds,
        "seed": args.seed,
        "tol": args.tol,
        "fault": args.fault,
        "violations": violations,
        "total_violations": int(sum(violations.values())),
        "flows_failed": len(errors),
        "all_converged": all(f["converged"] for f in ok) and not errors,
        "max_steps_to_defect_1e-6": max((f["steps_to_defect_1e-6"] or math.inf) for f in ok) if ok else None,
        "max_final_aligned_dH": max(f["final_aligned_dH"] for f in ok) if ok else None,
        "worst_slack": {
            k: _worst(f["worst"][k] for f in ok) for k in ("i", "ii", "iii", "c_monotone")
        },
        "max_area_drift": max(f["worst"]["area_drift"] for f in ok) if ok else None,
        "max_symmetry_defect": max(f["worst"]["symmetry_defect"] for f in ok) if ok else None,
    }
    if summary["max_steps_to_defect_1e-6"] == math.inf:
        summary["max_steps_to_defect_1e-6"] = None
    report = {"summary": summary, "flows": flows}
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    if args.report:
        _write(args.report, text)
    print(json.dumps(summary, sort_keys=True))
    if summary["total_violations"] > 0:
        return EXIT_FAILED
    if not summary["all_converged"]:
        return EXIT_NONCONVERGED
    return EXIT_OK


def _scan_job(job: tuple[int, int, FunctionalSpec]) -> tuple[int, int, float, float]:
    index, seed, F = job
    cell = sample_parallelogram(seed) if index % 4 == 3 else sample_random(seed)
    res = evaluate(cell.poly, F)
    return index, seed, res.value, res.error_estimate


def cmd_scan(args) -> int:
    try:
        F = FunctionalSpec.parse(args.functional).with_options(
            h=args.h, panels=args.panels, levels=args.levels)
    except (ValueError, KernelNotAdmissible) as exc:
        raise InvalidInput(str(exc)) from None
    if args.samples < 1:
        raise InvalidInput("--samples must be >= 1")
    ref = evaluate(regular_hexagon().poly, F)
    jobs = [(i, mix(args.seed, i), F) for i in range(args.samples)]
    rows = sorted(_map(_scan_job, jobs))
    eps = F.epsilon
    bad = [r for r in rows if not ref.value <= r[2] + r[3] + eps]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sample", "seed", "value", "error_estimate"])
    w.writerow(["hstar", "", format(ref.value, ".17g"), format(ref.error_estimate, ".17g")])
    for i, seed, v, e in rows:
        w.writerow([i, seed, format(v, ".17g"), format(e, ".17g")])
    if args.out:
        _write(args.out, buf.getvalue())
    margin = min(r[2] + r[3] + eps - ref.value for r in rows)
    print(f"{F.label()}: F(H*)={ref.value:.12g} +- {ref.error_estimate:.3g}; "
          f"min sample={min(r[2] for r in rows):.12g}; worst margin={margin:.3g}; "
          f"violations={len(bad)}")
    return EXIT_FAILED if bad else EXIT_OK


def cmd_tile(args) -> int:
    if args.rings < 1:
        raise InvalidInput("--rings must be >= 1")
    if args.kind is None and args.input is not None:
        # non-tiles are legitimate input here: they should fail --check, not parse
        try:
            poly = load_polygon(args.input)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            raise InvalidInput(f"cannot read {args.input}: {exc}") from None
        try:
            verts = HexCell.from_polygon(poly).vertices
        except ValueError:
            if len(poly) != 6:
                print(f"class={classify(poly).value}; no lattice to draw", file=sys.stderr)
                return EXIT_FAILED if args.check else EXIT_INVALID
            verts = poly.vertices
    else:
        verts = cell_from_args(args).vertices
    t1, t2 = verts[0] - verts[2], verts[1] - verts[3]
    cells = [((m, n), verts + m * t1 + n * t2) for m, n in hex_ring_offsets(args.rings)]
    if args.svg:
        _write(args.svg, tiling_svg(cells, __version__))
    status = EXIT_OK
    if args.check:
        poly = ConvexPolygon(verts)
        rep = verify_tiling(verts, rings=args.rings, seed=args.seed)
        cls = classify(poly)
        passed = rep.passed and cls is not TileClass.NOT_A_TILE
        print(json.dumps(dict(rep.to_dict(), cls=cls.value, cells=len(cells)), sort_keys=True))
        status = EXIT_OK if passed else EXIT_FAILED
    else:
        print(f"cells={len(cells)}")
    return status


def cmd_evaluate(args) -> int:
    cell = cell_from_args(args)
    try:
        F = FunctionalSpec.parse(args.functional)
    except (ValueError, KernelNotAdmissible) as exc:
        raise InvalidInput(str(exc)) from None
    print(json.dumps(evaluate(cell.poly, F).to_dict(), sort_keys=True))
    return EXIT_OK


def _add_cell_args(p) -> None:
    p.add_argument("--input", help="polygon JSON file {\"vertices\": [[x, y], ...]}")
    p.add_argument("--kind", help="regular | random:<seed> | parallelogram:x1,y1,...,x4,y4")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="honeycomb", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symmetrize", help="run the Steiner flow on one cell")
    _add_cell_args(p)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--out", help="trajectory CSV")
    p.add_argument("--svg", help="overlay of H_0, H_1, H_n and H*")
    p.set_defaults(func=cmd_symmetrize)

    p = sub.add_parser("verify-lemma", help="check the step inequalities on random flows")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--report", help="JSON report")
    p.add_argument("--fault", choices=["inflate-b"], help="inject a constructed violation")
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("scan", help="compare F(H*) with random unit-area cells")
    p.add_argument("--functional", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="scan CSV")
    p.add_argument("--h", type=float, help="mesh size for lambda1")
    p.add_argument("--panels", type=int, help="boundary panels for logcap")
    p.add_argument("--levels", type=int, help="refinement levels for kernel energies")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("tile", help="draw and check lattice translates of a cell")
    _add_cell_args(p)
    p.add_argument("--rings", type=int, default=2)
    p.add_argument("--svg")
    p.add_argument("--check", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="probe seed for --check")
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("evaluate", help="evaluate one functional on one cell")
    _add_cell_args(p)
    p.add_argument("--functional", required=True)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (FlowError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
