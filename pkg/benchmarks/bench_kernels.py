#!/usr/bin/env python3
"""Benchmark the compiled fusion kernels against the pure-Python fallback.

Times the two hot kernels (Cartesian mass product, interval-membership
subset counting) on growing workloads plus one end-to-end corpus run per
backend.  Run after ``pip install -e . --no-build-isolation``:

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import time

from eprm import _pykernels

try:
    from eprm import _ckernels
except ImportError:
    _ckernels = None

import numpy as np


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def bench_combine(rng, n_bits, focal, repeat):
    population = (1 << n_bits) - 1
    masks_a = rng.sample(range(1, 1 << n_bits), min(focal, population))
    masks_b = rng.sample(range(1, 1 << n_bits), min(focal, population))
    masses_a = [1.0 / len(masks_a)] * len(masks_a)
    masses_b = [1.0 / len(masks_b)] * len(masks_b)

    def run_python():
        for _ in range(200):
            _pykernels.combine_masked(masks_a, masses_a, masks_b, masses_b, False)

    t_py = _time(run_python, repeat)
    t_c = None
    if _ckernels is not None:
        arr_a = np.asarray(masks_a, dtype=np.uint64)
        arr_b = np.asarray(masks_b, dtype=np.uint64)
        w_a = np.asarray(masses_a)
        w_b = np.asarray(masses_b)

        def run_compiled():
            for _ in range(200):
                _ckernels.combine_masked(arr_a, w_a, arr_b, w_b, False, n_bits)

        t_c = _time(run_compiled, repeat)
    return f"combine {n_bits:>2} bits x {len(masks_a):>3} focal", t_py, t_c


def bench_interval(rng, aircraft, speeds, repeat):
    mins = [rng.uniform(0.0, 0.5) for _ in range(aircraft)]
    maxs = [lo + rng.uniform(0.1, 0.5) for lo in mins]
    pooled = [rng.uniform(0.0, 1.1) for _ in range(speeds)]

    def run_python():
        for _ in range(50):
            _pykernels.interval_counts(mins, maxs, pooled)

    t_py = _time(run_python, repeat)
    t_c = None
    if _ckernels is not None:
        a_mins = np.asarray(mins)
        a_maxs = np.asarray(maxs)
        a_pool = np.asarray(pooled)

        def run_compiled():
            for _ in range(50):
                _ckernels.interval_counts(a_mins, a_maxs, a_pool)

        t_c = _time(run_compiled, repeat)
    return f"intervals {aircraft} aircraft x {speeds:>5} speeds", t_py, t_c


def bench_corpus(cases, repeat):
    # end to end: generation plus both decisions, whichever backend the
    # package selected at import (set EPRM_DISABLE_EXTENSION=1 to compare)
    from eprm import GenerationConfig, KERNEL_BACKEND, case_seed, decide_case, generate_case

    config = GenerationConfig()

    def run():
        for idx in range(cases):
            decide_case(
                generate_case(config, case_seed(7, idx), case_id=idx, include_trajectories=False)
            )

    return f"corpus {cases} cases ({KERNEL_BACKEND} backend)", _time(run, repeat), None


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5, help="best-of repetitions")
    args = parser.parse_args()
    rng = random.Random(1234)
    rows = [
        bench_combine(rng, 4, 12, args.repeat),
        bench_combine(rng, 8, 64, args.repeat),
        bench_combine(rng, 12, 256, args.repeat),
        bench_interval(rng, 3, 400, args.repeat),
        bench_interval(rng, 6, 2000, args.repeat),
        bench_interval(rng, 8, 5000, args.repeat),
        bench_corpus(200, max(1, args.repeat // 2)),
    ]
    if _ckernels is None:
        print("compiled kernels unavailable; timing the pure-Python fallback only\n")
    print(f"{'workload':<38} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, t_py, t_c in rows:
        if t_c is None:
            print(f"{name:<38} {t_py * 1e3:>8.2f}ms {'-':>10} {'-':>8}")
        else:
            print(f"{name:<38} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
