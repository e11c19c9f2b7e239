#!/usr/bin/env python3
"""Benchmark the compiled alignment kernel against the pure-Python fallback.

Synthesizes reference/hypothesis id sequences at song scale with a realistic
error mix (~10% subs, ~5% dels, ~5% ins) and times both kernels on identical
inputs.  Usage::

    python benchmarks/bench_align.py [--sizes 250,500,1000,2000] [--repeats 3]
"""

from __future__ import annotations

import argparse
import random
import time

from altkit import _align_py

try:
    from altkit import _align_core
except ImportError:
    _align_core = None


def make_pair(n_ref: int, vocab: int, rng: random.Random) -> tuple[list[int], list[int]]:
    ref = [rng.randrange(vocab) for _ in range(n_ref)]
    hyp = []
    for sym in ref:
        r = rng.random()
        if r < 0.05:
            continue  # deletion
        if r < 0.15:
            hyp.append(rng.randrange(vocab))  # substitution
        else:
            hyp.append(sym)
        if rng.random() < 0.05:
            hyp.append(rng.randrange(vocab))  # insertion
    return ref, hyp


def bench(kernel, pairs, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for ref, hyp in pairs:
            kernel.align_ids(ref, hyp)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="250,500,1000,2000")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--pairs", type=int, default=3, help="pairs per size")
    parser.add_argument("--vocab", type=int, default=800)
    args = parser.parse_args()

    rng = random.Random(2024)
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'words':>7} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>9}")
    for size in sizes:
        pairs = [make_pair(size, args.vocab, rng) for _ in range(args.pairs)]
        t_pure = bench(_align_py, pairs, args.repeats)
        if _align_core is None:
            print(f"{size:>7} {t_pure:>10.4f} {'unavailable':>13} {'-':>9}")
            continue
        for ref, hyp in pairs:  # identical results are part of the contract
            assert _align_core.align_ids(ref, hyp) == _align_py.align_ids(ref, hyp)
        t_core = bench(_align_core, pairs, args.repeats)
        print(f"{size:>7} {t_pure:>10.4f} {t_core:>13.4f} {t_pure / t_core:>8.1f}x")


if __name__ == "__main__":
    main()
