"""Benchmark the compiled ALS kernel against the pure-Python backend.

Run as:  python3 benchmarks/bench_als.py
"""

import time

import numpy as np

from pencilranks import _als_py

try:
    from pencilranks import _als
except ImportError:
    _als = None


def bench(kernel, m, n, r, s, sweeps, seed=0):
    rng = np.random.default_rng(seed)
    T0, T1 = rng.standard_normal((m, n)), rng.standard_normal((m, n))
    U, V = rng.standard_normal((m, r)), rng.standard_normal((n, r))
    X, Y = rng.standard_normal((m, s)), rng.standard_normal((n, s))
    w, z = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    t0 = time.perf_counter()
    for _ in range(sweeps):
        obj, _ = kernel.als_sweep(T0, T1, U, V, X, Y, w, z)
    return time.perf_counter() - t0, obj


def main():
    cases = [(2, 2, 1, 1, 20000), (4, 4, 2, 2, 20000),
             (8, 8, 4, 4, 10000), (20, 20, 10, 10, 2000),
             (50, 50, 25, 25, 200)]
    print(f"{'size':>12} {'ranks':>8} {'sweeps':>7} {'python':>10} "
          f"{'cython':>10} {'speedup':>8}")
    for m, n, r, s, sweeps in cases:
        tp, op = bench(_als_py, m, n, r, s, sweeps)
        row = f"{m}x{n}x2".rjust(12) + f"({r},{s})".rjust(9) \
            + f"{sweeps}".rjust(8) + f"{tp:10.3f}"
        if _als is None:
            print(row + "  (compiled kernel unavailable)")
            continue
        tc, oc = bench(_als, m, n, r, s, sweeps)
        assert abs(op - oc) <= 1e-6 * (1 + op), "backends disagree"
        print(row + f" {tc:10.3f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
