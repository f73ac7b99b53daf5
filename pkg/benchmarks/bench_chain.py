#!/usr/bin/env python3
"""Benchmark: compiled vs pure-Python outcome-chain kernels.

Usage: python benchmarks/bench_chain.py [n_samples]
"""

import sys
import time

import numpy as np

from qmc import _chain_py

try:
    from qmc import _chain_cy
except ImportError:
    _chain_cy = None


def time_call(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    rng = np.random.default_rng(7)
    uniforms = rng.random(100 + n)
    q_pp, q_pm = 0.9933071490757157, 0.9241418199786674  # long-contact kernel at theta = pi

    print(f"chain walk, {n} samples + 100 burn-in")
    rows = []
    py_t, py_count = time_call(_chain_py.count_plus_labels, q_pp, q_pm, uniforms, 100)
    rows.append(("python", py_t, py_count))
    if _chain_cy is not None:
        cy_t, cy_count = time_call(_chain_cy.count_plus_labels, q_pp, q_pm, uniforms, 100)
        rows.append(("cython", cy_t, cy_count))
        assert cy_count == py_count, "backends disagree"
    for name, t, count in rows:
        print(f"  {name:<7} {t * 1e3:9.2f} ms   n_plus={count}")
    if _chain_cy is not None:
        print(f"  speedup {py_t / cy_t:6.1f}x")

    steps = 1_000_000
    print(f"\npower iteration, {steps} steps")
    rows = []
    py_t, py_p = time_call(_chain_py.power_iterate, q_pp, q_pm, 1.0, steps)
    rows.append(("python", py_t, py_p))
    if _chain_cy is not None:
        cy_t, cy_p = time_call(_chain_cy.power_iterate, q_pp, q_pm, 1.0, steps)
        rows.append(("cython", cy_t, cy_p))
        assert cy_p == py_p, "backends disagree"
    for name, t, p in rows:
        print(f"  {name:<7} {t * 1e3:9.2f} ms   p={p!r}")
    if _chain_cy is not None:
        print(f"  speedup {py_t / cy_t:6.1f}x")
    if _chain_cy is None:
        print("\ncompiled kernel not built; showed pure-Python timings only")


if __name__ == "__main__":
    main()
