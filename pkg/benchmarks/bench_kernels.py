#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy twins.

The workload mirrors the rate-map scenario: one momentum grid, thousands of
collapse-and-integrate evaluations at varying coupling strengths.  Run after
the package is installed:

    python benchmarks/bench_kernels.py [n_evals]
"""
import math
import sys
import time

import numpy as np

from wva_lab import _kernels
from wva_lab.polarization import MwiSettings
from wva_lab.spectra import SpectralProfile, build_grid

try:
    from wva_lab._kernels import _collapse_density_nb, _collapse_moments_nb, _oracle_density_nb

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def best_of(fn, repeats=3):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    n_evals = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    profile = SpectralProfile("supergaussian", 1550e-9, 6e-9, order=6)
    p0 = 2 * math.pi / 1550e-9
    gamma = 1.9 * math.pi / p0
    settings = MwiSettings(1, 1e-10, gamma, 0.002)
    grid = build_grid(profile, settings)
    ks = np.linspace(0.0, 1e-7, n_evals)

    print(f"grid points: {grid.points.size}, evaluations: {n_evals}")
    print(f"active backend: {_kernels.BACKEND}, numba importable: {HAVE_NUMBA}")
    print()

    def sweep(moments_fn):
        def run():
            acc = 0.0
            for k in ks:
                p, m = moments_fn(
                    grid.density, grid.points, grid.center, k + gamma, 0.004, grid.weights
                )
                acc += m / p
            return acc

        return run

    rows = []
    t_np = best_of(sweep(_kernels._collapse_moments_np))
    rows.append(("collapse_moments", "numpy", t_np, 1.0))
    if HAVE_NUMBA:
        warm = sweep(_collapse_moments_nb)
        warm()  # JIT compile outside the timed region
        t_nb = best_of(warm)
        rows.append(("collapse_moments", "numba", t_nb, t_np / t_nb))

    def density_np():
        for k in ks[:200]:
            _kernels._collapse_density_np(grid.density, grid.points, k + gamma, 0.004)

    t_np = best_of(density_np)
    rows.append(("collapse_density", "numpy", t_np, 1.0))
    if HAVE_NUMBA:

        def density_nb():
            for k in ks[:200]:
                _collapse_density_nb(grid.density, grid.points, k + gamma, 0.004)

        density_nb()
        t_nb = best_of(density_nb)
        rows.append(("collapse_density", "numba", t_nb, t_np / t_nb))

    def oracle_np():
        for k in ks[:50]:
            _kernels._oracle_density_np(grid.density, grid.points, float(k), 3, gamma, 0.002, False)

    t_np = best_of(oracle_np)
    rows.append(("oracle_density", "numpy", t_np, 1.0))
    if HAVE_NUMBA:

        def oracle_nb():
            for k in ks[:50]:
                _oracle_density_nb(grid.density, grid.points, float(k), 3, gamma, 0.002, False)

        oracle_nb()
        t_nb = best_of(oracle_nb)
        rows.append(("oracle_density", "numba", t_nb, t_np / t_nb))

    print(f"{'kernel':<18} {'backend':<8} {'time [s]':>10} {'speedup':>9}")
    for name, backend, t, speedup in rows:
        print(f"{name:<18} {backend:<8} {t:>10.4f} {speedup:>8.2f}x")


if __name__ == "__main__":
    main()
