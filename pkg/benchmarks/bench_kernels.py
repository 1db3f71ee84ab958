"""Compiled versus pure-numpy kernels on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 5]

Each workload is timed with both backends and the outputs are compared.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from honeycomb import _core
from honeycomb.energies.base import KernelSpec
from honeycomb.energies.potentials import gauss_legendre, graded_fan_rule
from honeycomb.geometry import signed_distances
from honeycomb.tiling import regular_hexagon, sample_random


def workloads():
    P = regular_hexagon().poly
    pts, _ = graded_fan_rule(P, 6, 6)
    pts = np.ascontiguousarray(pts[np.min(signed_distances(P, pts), axis=1) > 0])
    x, w = gauss_legendre(12)
    v = P.vertices
    for label, K, mode in [("potential exp exterior", KernelSpec.exponential(1), _core.EXTERIOR),
                           ("potential power interior", KernelSpec.riesz_power(1), _core.INTERIOR),
                           ("potential frac exterior", KernelSpec.fractional(0.5), _core.EXTERIOR)]:
        args = (v, pts, K.code, K.param, mode, x, w, 1.0)
        yield f"{label} ({len(pts)} pts)", "radial_potentials", args

    rng = np.random.default_rng(0)
    thetas = rng.uniform(0, 2 * np.pi, 4096)
    yield "ray exits (4096 rays x 4096 pts)", "ray_exit", (v, np.ascontiguousarray(pts[:4096]), thetas)

    # many small pairs, as in the flow's alignment search
    cells = [np.ascontiguousarray(sample_random(s).vertices) for s in range(200)]

    yield "hausdorff (200 hexagon pairs)", "hausdorff_many", (cells,)


def run(name, args, module):
    if name == "hausdorff_many":
        cells = args[0]
        return np.array([module.hausdorff(a, b) for a, b in zip(cells[:-1], cells[1:])])
    return np.asarray(getattr(module, name)(*args))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    if _core.ckernels is None:
        print("compiled backend not available; build with `pip install -e . --no-build-isolation`")
    print(f"{'workload':44s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s} {'max |diff|':>11s}")
    for label, name, args in workloads():
        py = run(name, args, _core.pykernels)
        t_py = min(timeit.repeat(lambda: run(name, args, _core.pykernels), number=1, repeat=opts.repeat))
        if _core.ckernels is None:
            print(f"{label:44s} {1e3 * t_py:10.2f} {'-':>10s}")
            continue
        cy = run(name, args, _core.ckernels)
        t_cy = min(timeit.repeat(lambda: run(name, args, _core.ckernels), number=1, repeat=opts.repeat))
        diff = float(np.max(np.abs(py - cy)))
        print(f"{label:44s} {1e3 * t_py:10.2f} {1e3 * t_cy:10.2f} {t_py / t_cy:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
