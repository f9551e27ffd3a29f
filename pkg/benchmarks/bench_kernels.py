"""Benchmark the compiled iteration kernel against the pure numpy path.

Runs a few representative primitive chains over a sampling grid,
reports wall time per backend, the speedup, and the largest coordinate
deviation between the two orbits.

Usage: python benchmarks/bench_kernels.py [--n 2000] [--grid 64]
"""

import argparse
import time

import numpy as np

from torusdyn import kernels
from torusdyn.maps import (
    LiftedMap,
    Linear,
    ShearX,
    Translation,
    VerticalFlow,
)
from torusdyn.profiles import Plateau, Sin2
from torusdyn.rotation import grid_points

CHAINS = {
    "translation": LiftedMap([Translation((0.3, 0.7))]),
    "twist": LiftedMap([Linear(((1, 1), (0, 1)))]),
    "shear_sin2": LiftedMap([ShearX(Sin2(), 1.0)]),
    "double_plateau": LiftedMap(
        [
            ShearX(Plateau(), 1.0),
            VerticalFlow(Plateau(), 1.0),
            Translation((0.125, 0.125)),
        ]
    ),
}


def run(F, P, n, table, backend):
    Q = np.ascontiguousarray(P.copy())
    t0 = time.perf_counter()
    if backend == "compiled":
        status = kernels.run_compiled(Q, n, table)
        if status != 0:
            raise RuntimeError("orbit diverged")
    else:
        from torusdyn.maps import _apply_chain

        for _ in range(n):
            Q = _apply_chain(F, Q)
    return time.perf_counter() - t0, Q


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2000, help="iterations")
    ap.add_argument("--grid", type=int, default=64, help="grid per axis")
    args = ap.parse_args()

    if kernels.backend_name() != "compiled":
        raise SystemExit(
            "compiled backend unavailable; build the extension first"
        )

    P = grid_points(args.grid)
    print(
        f"{args.grid * args.grid} points, {args.n} iterations\n"
        f"{'chain':>16s} {'python':>10s} {'compiled':>10s} "
        f"{'speedup':>8s} {'max dev':>10s}"
    )
    for name, F in CHAINS.items():
        table = kernels.encode_chain(F)
        t_py, q_py = run(F, P, args.n, table, "python")
        t_c, q_c = run(F, P, args.n, table, "compiled")
        dev = float(np.abs(q_py - q_c).max())
        print(
            f"{name:>16s} {t_py:>9.3f}s {t_c:>9.3f}s "
            f"{t_py / t_c:>7.1f}x {dev:>10.2e}"
        )


if __name__ == "__main__":
    main()
