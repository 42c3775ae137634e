#!/usr/bin/env python3
"""Benchmark the compiled step kernel against the NumPy fallback.

Times the fused time step and the per-step diagnostics kernels on a few
grid sizes and prints ms/step plus the speedup.  Results also sanity-check
that both backends produce bitwise-identical steps.

Usage:
    python benchmarks/compare_backends.py [--sizes 100,200,400] [--steps 200]
"""

import argparse
import time

import numpy as np

from swetbc import InitialCondition, PhysicalParams, build_grid, init_state, make_boundary_case
from swetbc.kernels import BoundaryData, available_backends, get_backend


def time_backend(name, grid, params, layout, n_steps):
    kern = get_backend(name)
    bd = BoundaryData(layout)
    ic = InitialCondition(amplitude=1e-3, center=(grid.L / 2, grid.L / 2), width=100.0 / grid.L**2)
    st = init_state(grid, params, ic, layout)
    cur = [st.phi, st.u1, st.u2]
    nxt = [np.empty(grid.shape) for _ in range(3)]
    work = np.empty((3,) + grid.shape)
    dt = 2.0 * grid.h

    args = (grid.h, dt, params.depth, params.g, 2.0 * params.mu / params.rho, True,
            bd.dir_i, bd.dir_j, bd.ud1, bd.ud2,
            bd.trn_i, bd.trn_j, bd.trn_n1, bd.trn_n2,
            params.transmission_speed, work)

    # warm up
    kern.step_fields(cur[0], cur[1], cur[2], nxt[0], nxt[1], nxt[2], *args)

    t0 = time.perf_counter()
    for _ in range(n_steps):
        status = kern.step_fields(cur[0], cur[1], cur[2], nxt[0], nxt[1], nxt[2], *args)
        assert status == 0
        cur, nxt = nxt, cur
    step_ms = (time.perf_counter() - t0) / n_steps * 1e3

    t0 = time.perf_counter()
    reps = max(1, n_steps // 4)
    for _ in range(reps):
        kern.dissipation_cell_sum(cur[0], cur[1], cur[2], grid.h)
        kern.energy_sums(cur[0], cur[1], cur[2], cur[0])
    diag_ms = (time.perf_counter() - t0) / reps * 1e3
    return step_ms, diag_ms, cur


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="100,200,400")
    parser.add_argument("--steps", type=int, default=200)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    params = PhysicalParams(depth=0.1)

    header = f"{'N':>6} | " + " | ".join(f"{b} step/diag (ms)" for b in backends)
    if len(backends) == 2:
        header += " | step speedup"
    print(header)
    print("-" * len(header))
    for n in sizes:
        grid = build_grid(1.0, n)
        layout = make_boundary_case("v", grid)
        row = [f"{n:>6}"]
        step_times = {}
        finals = {}
        for b in backends:
            step_ms, diag_ms, cur = time_backend(b, grid, params, layout, args.steps)
            step_times[b] = step_ms
            finals[b] = cur
            row.append(f"{step_ms:8.2f} / {diag_ms:6.2f}")
        if len(backends) == 2:
            row.append(f"{step_times['numpy'] / step_times['cython']:8.2f}x")
            same = all(np.array_equal(a, b) for a, b in zip(finals["numpy"], finals["cython"]))
            if not same:
                row.append("  (WARNING: backend results differ)")
        print(" | ".join(row))


if __name__ == "__main__":
    main()
