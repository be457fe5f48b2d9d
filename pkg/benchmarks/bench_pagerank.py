"""Benchmark the two power-iteration backends against each other.

Generates random row-normalized COO systems at several sizes, times the
kernel under each backend, and verifies both produce the same ranks.
The numba backend is warmed once so JIT compilation is reported
separately from steady-state timings.

Usage::

    python3 benchmarks/bench_pagerank.py [--sizes 1000,10000,100000]
        [--degree 6] [--repeats 5] [--seed 7]
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from graphtalk import _rankcore


def build_system(rng: np.random.Generator, n: int, degree: int):
    """Random graph as the kernel's COO input, ``degree`` edges per node."""
    m = n * degree
    src = rng.integers(0, n, size=m, dtype=np.int64)
    dst = rng.integers(0, n, size=m, dtype=np.int64)
    weight = rng.choice([0.5, 1.0, 2.0], size=m)
    order = np.lexsort((dst, src))
    src, dst, weight = src[order], dst[order], weight[order]
    out = np.bincount(src, weights=weight, minlength=n)
    val = weight / out[src]
    dangling = out == 0.0
    teleport = np.full(n, 1.0 / n)
    return src, dst, val, dangling, teleport


def run_kernel(system, repeats: int) -> tuple[np.ndarray, float]:
    """Best-of-``repeats`` wall time for one converged solve."""
    best = float("inf")
    ranks = None
    for _ in range(repeats):
        started = time.perf_counter()
        ranks = _rankcore.power_iteration(*system, 0.85, 1e-10, 200)
        best = min(best, time.perf_counter() - started)
    return ranks, best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="1000,10000,100000",
                        help="comma-separated node counts")
    parser.add_argument("--degree", type=int, default=6,
                        help="edges per node")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed repetitions per backend (best wins)")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s]
    rng = np.random.default_rng(args.seed)

    if _rankcore._numba_power_iteration is None:
        print("numba is not installed: only the numpy backend is available")

    # Warm the JIT on a tiny system so compile time is visible but kept
    # out of the per-size numbers.
    os.environ.pop("GRAPHTALK_PURE_NUMPY", None)
    if _rankcore.backend_name() == "numba":
        tiny = build_system(rng, 16, 2)
        started = time.perf_counter()
        _rankcore.power_iteration(*tiny, 0.85, 1e-10, 200)
        print(f"numba warmup (compile or cache load): "
              f"{time.perf_counter() - started:.3f}s")

    header = f"{'nodes':>9} {'edges':>9} {'numpy':>10} {'numba':>10} " \
             f"{'speedup':>8} {'L1 diff':>10}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        system = build_system(rng, n, args.degree)
        edges = system[0].shape[0]

        os.environ["GRAPHTALK_PURE_NUMPY"] = "1"
        assert _rankcore.backend_name() == "numpy"
        numpy_ranks, numpy_best = run_kernel(system, args.repeats)

        os.environ.pop("GRAPHTALK_PURE_NUMPY", None)
        if _rankcore.backend_name() == "numba":
            numba_ranks, numba_best = run_kernel(system, args.repeats)
            diff = float(np.abs(numpy_ranks - numba_ranks).sum())
            print(f"{n:>9} {edges:>9} {numpy_best:>9.4f}s "
                  f"{numba_best:>9.4f}s {numpy_best / numba_best:>7.2f}x "
                  f"{diff:>10.2e}")
        else:
            print(f"{n:>9} {edges:>9} {numpy_best:>9.4f}s "
                  f"{'n/a':>10} {'n/a':>8} {'n/a':>10}")


if __name__ == "__main__":
    main()
