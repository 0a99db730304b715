"""Timing comparison of the numba kernels against their numpy fallbacks.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    REPAIREVAL_NO_NUMBA=1 python3 benchmarks/bench_kernels.py   # fallback only

Each workload is timed as best-of-N wall clock over a fixed input set, so
numbers are comparable across runs. JIT compilation happens during the
warmup pass and is excluded.
"""

import argparse
import time

import numpy as np

from repaireval import _kernels


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def lev_workload(rng):
    pairs = [
        (
            rng.integers(0, 50, size=400).astype(np.int64),
            rng.integers(0, 50, size=400).astype(np.int64),
        )
        for _ in range(50)
    ]

    def run(fn):
        return lambda: [fn(a, b) for a, b in pairs]

    return "levenshtein 50x(400x400 ids)", run


def minmax_workload(rng):
    mats = []
    for _ in range(20):
        a = rng.random((32, 32))
        mats.append(np.ascontiguousarray(np.maximum(a, a.T)))

    def run(fn):
        return lambda: [fn(m, 4) for m in mats]

    return "minmax subset 20x(m=32,k=4)", run


def geometric_workload(rng):
    u = rng.random((1_000_000, 8))

    def run(fn):
        return lambda: fn(u, 0.6)

    return "geometric counts 1e6x8", run


WORKLOADS = [
    (lev_workload, "levenshtein_ids"),
    (minmax_workload, "minmax_subset"),
    (geometric_workload, "geometric_counts"),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeat count")
    args = parser.parse_args()

    rng = np.random.default_rng(0xBE7C)
    print(f"active backend: {_kernels.backend()}")
    rows = []
    for factory, name in WORKLOADS:
        label, run = factory(rng)
        numpy_fn = getattr(_kernels, f"{name}_numpy")
        numba_fn = getattr(_kernels, f"{name}_numba")
        run(numpy_fn)()  # warmup
        t_numpy = best_of(run(numpy_fn), args.repeats)
        if numba_fn is not None:
            run(numba_fn)()  # warmup triggers JIT compile
            t_numba = best_of(run(numba_fn), args.repeats)
            rows.append((label, t_numpy, t_numba, t_numpy / t_numba))
        else:
            rows.append((label, t_numpy, None, None))

    print(f"{'workload':<32} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for label, t_numpy, t_numba, speedup in rows:
        if t_numba is None:
            print(f"{label:<32} {t_numpy * 1e3:>10.2f} {'-':>10} {'-':>8}")
        else:
            print(f"{label:<32} {t_numpy * 1e3:>10.2f} {t_numba * 1e3:>10.2f} {speedup:>7.1f}x")
    if any(r[2] is None for r in rows):
        print("numba unavailable or disabled; unset REPAIREVAL_NO_NUMBA to compare")


if __name__ == "__main__":
    main()
