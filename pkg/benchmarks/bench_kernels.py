"""Time the compiled Monte Carlo kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--trials N] [--repeat R]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from qtransduce import _accel
from qtransduce.montecarlo import kernels as K


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _chain_call(impl, trials):
    stage = np.array([0.5, 0.8, 0.5])
    attempts = np.zeros(trials, dtype=np.int64)
    success = np.zeros(trials, dtype=np.bool_)
    key = np.uint64(K.link_key(1, 0))

    def run():
        with np.errstate(over="ignore"):
            impl(key, stage, 0, trials, 1000, attempts, success)

    return run


def _ies_call(impl, trials):
    params = np.array([0.5, 0.5, 1.0, 0.25, 1.0])
    attempts = np.zeros(trials, dtype=np.int64)
    success = np.zeros(trials, dtype=np.bool_)
    counts = np.zeros(5, dtype=np.int64)
    key = np.uint64(K.link_key(1, 0))

    def run():
        counts[:] = 0
        with np.errstate(over="ignore"):
            impl(key, params, False, 0, trials, 1000, attempts, success, counts)

    return run


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if not _accel.HAVE_NUMBA:
        print("numba unavailable or disabled; nothing to compare")
        return 0

    print(f"{'kernel':<8}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, make, fast, slow in (
        ("chain", _chain_call, K._chain_numba, K._chain_numpy),
        ("ies", _ies_call, K._ies_numba, K._ies_numpy),
    ):
        make(fast, 10)()  # compile outside the timed region
        tf = _time(make(fast, args.trials), args.repeat)
        ts = _time(make(slow, args.trials), args.repeat)
        print(f"{name:<8}{tf:>12.4f}{ts:>12.4f}{ts / tf:>10.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
