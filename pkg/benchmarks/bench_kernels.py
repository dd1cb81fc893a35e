#!/usr/bin/env python3
"""Benchmark the jit kernels against their pure fallbacks.

The package picks the numba path automatically (HAMDEC_NO_NUMBA=1 forces
the fallback); this script times both paths side by side on the two hot
kernels: the pair-probability scan behind graph sampling and the
Hopcroft-Karp matching behind the existence oracle.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from hamdec import _kernels
from hamdec._seeds import derive, generator
from hamdec.realize import _csr


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_scan(n, repeat):
    rng = generator(derive(12, "bench", n))
    blocks = rng.integers(0, 3, n).astype(np.int64)
    probs = np.full((3, 3), 0.4)
    u = rng.random(n * (n - 1) // 2)
    args = (blocks, probs, u)
    rows = []
    if _kernels.scan_pairs_compiled is not None:
        _kernels.scan_pairs_compiled(*args)  # compile outside the clock
        rows.append(("numba", best_of(_kernels.scan_pairs_compiled, args, repeat)))
    rows.append(("numpy", best_of(_kernels.scan_pairs_numpy, args, repeat)))
    return rows


def bench_matching(n, density, repeat):
    rng = generator(derive(34, "bench", n))
    m = int(density * n * n)
    edges = {
        (int(a), int(b))
        for a, b in zip(rng.integers(0, n, m), rng.integers(0, n, m))
    }
    indptr, indices = _csr(n, n, edges)
    args = (n, n, indptr, indices)
    rows = []
    if _kernels.hopcroft_karp_compiled is not None:
        _kernels.hopcroft_karp_compiled(*args)
        rows.append(("numba", best_of(_kernels.hopcroft_karp_compiled, args, repeat)))
    rows.append(("python", best_of(_kernels.hopcroft_karp_python, args, repeat)))
    return rows


def show(title, rows):
    print(f"\n{title}")
    base = rows[-1][1]
    for name, t in rows:
        speedup = base / t if t else float("inf")
        print(f"  {name:>6}: {t * 1e3:9.2f} ms   ({speedup:5.1f}x vs fallback)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels.scan_pairs_compiled is None:
        print("numba path unavailable (HAMDEC_NO_NUMBA set or numba missing);"
              " timing fallbacks only")
    for n in (1000, 3000):
        show(f"pair scan, n={n} ({n*(n-1)//2} pairs)", bench_scan(n, args.repeat))
    for n, density in ((300, 0.2), (1000, 0.05)):
        show(
            f"bipartite matching, {n}x{n}, density {density}",
            bench_matching(n, density, args.repeat),
        )


if __name__ == "__main__":
    main()
