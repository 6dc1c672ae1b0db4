#!/usr/bin/env python3
"""Benchmark the compiled simplex kernels against the pure-Python twins.

Runs the two hot loops -- the elimination step (pivot_update) and
sparse-column pricing (price_dantzig) -- on identical random exact-
rational inputs and reports the timing for each backend.

Usage: python3 benchmarks/bench_kernel.py [--rows N] [--cols N] [--repeat N]
"""

import argparse
import copy
import random
import time

from splitbin import _kernel_py
from splitbin._rational import mpq

try:
    from splitbin import _speedups
except ImportError:
    _speedups = None


def rand_mpq(rng):
    return mpq(rng.randint(-9, 9), rng.randint(1, 9))


def make_matrix(rng, rows, cols):
    mat = [[rand_mpq(rng) for _ in range(cols)] for _ in range(rows)]
    # Ensure a usable pivot element.
    mat[0][0] = mpq(rng.randint(1, 9), rng.randint(1, 9))
    return mat


def make_columns(rng, rows, cols, nnz):
    col_idx, col_val = [], []
    for _ in range(cols):
        picks = sorted(rng.sample(range(rows), min(nnz, rows)))
        col_idx.append(picks)
        col_val.append([rand_mpq(rng) for _ in picks])
    cost = [mpq(0)] * cols
    y = [rand_mpq(rng) for _ in range(rows)]
    is_basic = [False] * cols
    return col_idx, col_val, cost, y, is_basic


def bench_pivot(kernel, matrices, repeat):
    work = [copy.deepcopy(m) for m in matrices for _ in range(repeat)]
    start = time.perf_counter()
    for m in work:
        kernel.pivot_update(m, 0, 0)
    return (time.perf_counter() - start) / len(work)


def bench_price(kernel, args_list, repeat):
    start = time.perf_counter()
    for _ in range(repeat):
        for a in args_list:
            kernel.price_dantzig(*a)
    return (time.perf_counter() - start) / (repeat * len(args_list))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=50)
    ap.add_argument("--cols", type=int, default=2000)
    ap.add_argument("--nnz", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    opts = ap.parse_args()
    rng = random.Random(opts.seed)

    matrices = [make_matrix(rng, opts.rows, opts.rows + 1) for _ in range(4)]
    cols = make_columns(rng, opts.rows, opts.cols, opts.nnz)
    price_args = [cols + (0, opts.cols)]

    backends = [("pure", _kernel_py)]
    if _speedups is not None:
        backends.append(("compiled", _speedups))
    else:
        print("compiled extension not available; benchmarking pure only")

    results = {}
    for name, kernel in backends:
        tp = bench_pivot(kernel, matrices, opts.repeat * 50)
        tq = bench_price(kernel, price_args, opts.repeat * 20)
        results[name] = (tp, tq)
        print(
            f"{name:>9}: pivot_update({opts.rows}x{opts.rows + 1}) "
            f"{tp * 1e6:9.1f} us   "
            f"price_dantzig({opts.cols} cols, nnz {opts.nnz}) "
            f"{tq * 1e6:9.1f} us"
        )
    if len(results) == 2:
        sp, sq = (
            results["pure"][0] / results["compiled"][0],
            results["pure"][1] / results["compiled"][1],
        )
        print(f"  speedup: pivot_update {sp:.2f}x, price_dantzig {sq:.2f}x")


if __name__ == "__main__":
    main()
