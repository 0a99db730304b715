"""Hot numeric kernels: numba fast path with a pure-numpy fallback.

Set REPAIREVAL_NO_NUMBA=1 (read at import time) to force the numpy
implementations; the numpy path is also used automatically when numba is
not importable. Both variants stay importable so benchmarks and parity
tests can run them side by side. All kernels are deterministic and take
any randomness as pre-drawn inputs, so the two backends return identical
values bit for bit.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

__all__ = [
    "USING_NUMBA",
    "backend",
    "levenshtein_ids",
    "levenshtein_ids_numpy",
    "minmax_subset",
    "minmax_subset_numpy",
    "geometric_counts",
    "geometric_counts_numpy",
]


def _numba_disabled() -> bool:
    return os.environ.get("REPAIREVAL_NO_NUMBA", "").strip().lower() not in ("", "0", "false")


def levenshtein_ids_numpy(a: np.ndarray, b: np.ndarray) -> int:
    """Unit-cost edit distance between two int64 id sequences.

    Two-row DP; the left-to-right insertion dependency is resolved as a
    prefix minimum: cur[j] = min_{j'<=j} (base[j'] + (j - j')), computed by
    accumulating base - j' and adding j back.
    """
    n, m = a.size, b.size
    if n == 0:
        return m
    if m == 0:
        return n
    if m > n:
        a, b = b, a
        n, m = m, n
    offsets = np.arange(m + 1, dtype=np.int64)
    prev = offsets.copy()
    cur = np.empty(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        cur[0] = i
        np.minimum(prev[:-1] + (b != a[i - 1]), prev[1:] + 1, out=cur[1:])
        shifted = cur - offsets
        np.minimum.accumulate(shifted, out=shifted)
        np.add(shifted, offsets, out=cur)
        prev, cur = cur, prev
    return int(prev[m])


def _levenshtein_ids_loops(a, b):  # compiled by numba below
    n = a.size
    m = b.size
    if n == 0:
        return m
    if m == 0:
        return n
    if m > n:
        a, b = b, a
        n, m = m, n
    prev = np.arange(m + 1, dtype=np.int64)
    cur = np.empty(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (0 if ai == b[j - 1] else 1)
            t = prev[j] + 1
            if t < best:
                best = t
            t = cur[j - 1] + 1
            if t < best:
                best = t
            cur[j] = best
        prev, cur = cur, prev
    return prev[m]


# Pair slots for subsets up to k=8, ordered by the larger slot index so the
# first k*(k-1)/2 rows are exactly the pairs within slots 0..k-1.
_PAIR_SLOTS = np.array(
    [(i, j) for j in range(8) for i in range(j)], dtype=np.int64
)


def minmax_subset_numpy(sym: np.ndarray, k: int, chunk: int = 65536):
    """Exact min-max subset search over a symmetric similarity matrix.

    Enumerates all C(m, k) index subsets in lexicographic order and keeps
    the one whose maximum pairwise similarity is smallest; strict
    improvement plus lexicographic enumeration makes ties resolve to the
    lexicographically smallest subset. Returns (objective, indices).
    """
    m = sym.shape[0]
    pair_idx = list(itertools.combinations(range(k), 2))
    combo_iter = itertools.combinations(range(m), k)
    best_obj = np.inf
    best = None
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combo_iter, chunk)),
            dtype=np.int64,
        )
        if flat.size == 0:
            break
        combos = flat.reshape(-1, k)
        objs = np.full(combos.shape[0], -np.inf)
        for a, b in pair_idx:
            np.maximum(objs, sym[combos[:, a], combos[:, b]], out=objs)
        j = int(np.argmin(objs))  # first minimum in lexicographic order
        if objs[j] < best_obj:
            best_obj = float(objs[j])
            best = combos[j].copy()
    return best_obj, best


def _minmax_subset_loops(sym, k, pair_slots):  # compiled by numba below
    m = sym.shape[0]
    npairs = (k * (k - 1)) // 2
    idx = np.arange(k, dtype=np.int64)
    best = np.arange(k, dtype=np.int64)
    best_obj = np.inf
    while True:
        obj = -np.inf
        for p in range(npairs):
            v = sym[idx[pair_slots[p, 0]], idx[pair_slots[p, 1]]]
            if v > obj:
                obj = v
        if obj < best_obj:
            best_obj = obj
            for q in range(k):
                best[q] = idx[q]
        # advance to the next combination in lexicographic order
        pos = k - 1
        while pos >= 0 and idx[pos] == m - k + pos:
            pos -= 1
        if pos < 0:
            break
        idx[pos] += 1
        for q in range(pos + 1, k):
            idx[q] = idx[q - 1] + 1
    return best_obj, best


def geometric_counts_numpy(u: np.ndarray, r: float):
    """Per-step accepted-run statistics for pre-drawn uniforms u[steps, k].

    A step accepts the leading run of u < r and always emits one more
    token. Returns (accepted_total, tokens_total, tokens_squared_total).
    """
    steps, k = u.shape
    hits = u < r
    first_miss = np.argmax(~hits, axis=1)
    lead = np.where(hits.all(axis=1), k, first_miss).astype(np.int64)
    tokens = lead + 1
    return int(lead.sum()), int(tokens.sum()), int((tokens * tokens).sum())


def _geometric_counts_loops(u, r):  # compiled by numba below
    steps, k = u.shape
    accepted = 0
    tokens = 0
    tokens_sq = 0
    for s in range(steps):
        lead = 0
        for j in range(k):
            if u[s, j] < r:
                lead += 1
            else:
                break
        t = lead + 1
        accepted += lead
        tokens += t
        tokens_sq += t * t
    return accepted, tokens, tokens_sq


USING_NUMBA = False
levenshtein_ids_numba = None
minmax_subset_numba = None
geometric_counts_numba = None

if not _numba_disabled():
    try:
        from numba import njit
    except ImportError:
        njit = None
    if njit is not None:
        _lev_jit = njit(cache=True)(_levenshtein_ids_loops)
        _minmax_jit = njit(cache=True)(_minmax_subset_loops)
        _geo_jit = njit(cache=True)(_geometric_counts_loops)

        def levenshtein_ids_numba(a, b):
            return int(_lev_jit(a, b))

        def minmax_subset_numba(sym, k):
            if k > 8:
                return minmax_subset_numpy(sym, k)
            obj, best = _minmax_jit(sym, k, _PAIR_SLOTS)
            return float(obj), best

        def geometric_counts_numba(u, r):
            a, t, t2 = _geo_jit(u, r)
            return int(a), int(t), int(t2)

        USING_NUMBA = True

if USING_NUMBA:
    levenshtein_ids = levenshtein_ids_numba
    minmax_subset = minmax_subset_numba
    geometric_counts = geometric_counts_numba
else:
    levenshtein_ids = levenshtein_ids_numpy
    minmax_subset = minmax_subset_numpy
    geometric_counts = geometric_counts_numpy


def backend() -> str:
    """Name of the active kernel backend: 'numba' or 'numpy'."""
    return "numba" if USING_NUMBA else "numpy"
