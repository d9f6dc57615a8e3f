#!/usr/bin/env python3
"""Benchmark the compiled numeric core against the NumPy fallback.

Usage:  python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import math
import time

import numpy as np

from maslov import _kernels_py

try:
    from maslov import _kernels_c
except ImportError:
    _kernels_c = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(7)

    n = 2048
    diag = 2.0 + rng.standard_normal(n)
    off = -1.0 + 0.1 * rng.standard_normal(n - 1)
    yield "tridiag_count_below (n=2048, 100 shifts)", lambda impl: [
        impl.tridiag_count_below(diag, off, s) for s in np.linspace(-1, 5, 100)
    ]

    g = 4096
    x = np.linspace(-12, 12, g)
    psi = np.exp(-x * x / 4) * (24.0 / (g - 1))
    yield "apply_quadratic_kernel (G=4096)", lambda impl: impl.apply_quadratic_kernel(
        psi.astype(complex), x, 0.35, -1.2
    )

    steps = 4096
    w = np.full(2 * steps + 1, 1.0)
    dt = 3.5 * math.pi / steps
    yield "rk4_linear_second_order (4096 steps, 50 runs)", lambda impl: [
        impl.rk4_linear_second_order(w, dt, 0.0, 1.0) for _ in range(50)
    ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _kernels_c is None:
        print("compiled core not built; timing the Python fallback only")
    header = f"{'kernel':<48} {'python':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, runner in cases():
        t_py = best_of(lambda: runner(_kernels_py), args.repeat)
        if _kernels_c is not None:
            t_c = best_of(lambda: runner(_kernels_c), args.repeat)
            print(f"{name:<48} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms {t_py / t_c:>7.1f}x")
        else:
            print(f"{name:<48} {t_py * 1e3:>8.2f}ms {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
