"""Pairwise program similarity and min-max diverse subset selection.

Similarity between two programs is 1 minus their line-level edit cost; it
is asymmetric (the cost normalizes by the source side) and can go
negative when programs differ by more lines than the source holds.
Selection works on the symmetrized matrix max(sim[i][j], sim[j][i]) and
picks the k-subset whose worst (largest) pairwise similarity is smallest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .editcost import edit_cost_sequences
from .errors import DomainError, ExactTooLarge
from .normalize import lines_of

__all__ = [
    "DEFAULT_SUBSET_BUDGET",
    "SimilarityMatrix",
    "build_similarity",
    "select_diverse",
    "subset_objective",
]

DEFAULT_SUBSET_BUDGET = 1_000_000


@dataclass(frozen=True)
class SimilarityMatrix:
    """m x m similarity with unit diagonal; entries may be negative."""

    sim: np.ndarray

    @property
    def m(self) -> int:
        return int(self.sim.shape[0])

    def symmetrized(self) -> np.ndarray:
        return np.maximum(self.sim, self.sim.T)


def build_similarity(items) -> SimilarityMatrix:
    """Pairwise similarity over programs (or raw line sequences).

    sim[i][j] = 1 - edit_cost(items[i], items[j]); EmptySource propagates
    when some item has no lines.
    """
    seqs = [lines_of(it) for it in items]
    m = len(seqs)
    sim = np.ones((m, m), dtype=np.float64)
    for i in range(m):
        for j in range(m):
            if i != j:
                r = edit_cost_sequences(seqs[i], seqs[j], "line")
                sim[i, j] = 1.0 - float(r.edit_cost)
    return SimilarityMatrix(sim)


def select_diverse(
    sim,
    k: int,
    strategy: str = "exact",
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> tuple[int, ...]:
    """Pick k mutually dissimilar items; returns sorted indices.

    strategy="exact" enumerates all C(m, k) subsets (ExactTooLarge beyond
    `budget`) and breaks ties lexicographically. strategy="greedy" seeds
    with the globally least-similar pair and repeatedly adds the item
    minimizing its maximum similarity to the chosen set (smallest index on
    ties); it never beats exact but scales past the budget.
    """
    matrix = sim.symmetrized() if isinstance(sim, SimilarityMatrix) else None
    if matrix is None:
        arr = np.asarray(sim, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainError("similarity must be a square matrix")
        matrix = np.maximum(arr, arr.T)
    m = matrix.shape[0]
    if not 2 <= k <= m:
        raise DomainError(f"k must be in [2, m] = [2, {m}], got {k}")
    if strategy == "exact":
        total = comb(m, k)
        if total > budget:
            raise ExactTooLarge(
                f"C({m}, {k}) = {total} subsets exceeds the budget of {budget}; "
                "use strategy='greedy'"
            )
        _, best = _kernels.minmax_subset(np.ascontiguousarray(matrix), k)
        return tuple(int(i) for i in best)
    if strategy == "greedy":
        return _greedy(matrix, k)
    raise DomainError(f"strategy must be 'exact' or 'greedy', got {strategy!r}")


def subset_objective(sim, indices) -> float:
    """Max pairwise symmetrized similarity within the chosen subset."""
    matrix = sim.symmetrized() if isinstance(sim, SimilarityMatrix) else None
    if matrix is None:
        arr = np.asarray(sim, dtype=np.float64)
        matrix = np.maximum(arr, arr.T)
    return max(float(matrix[a, b]) for a, b in itertools.combinations(indices, 2))


def _greedy(matrix: np.ndarray, k: int) -> tuple[int, ...]:
    m = matrix.shape[0]
    iu = np.triu_indices(m, 1)
    j = int(np.argmin(matrix[iu]))  # row-major upper triangle: lex-first tie win
    chosen = [int(iu[0][j]), int(iu[1][j])]
    worst = np.maximum(matrix[chosen[0]], matrix[chosen[1]])
    worst[chosen] = np.inf
    while len(chosen) < k:
        nxt = int(np.argmin(worst))  # first minimum: smallest index on ties
        chosen.append(nxt)
        np.maximum(worst, matrix[nxt], out=worst)
        worst[nxt] = np.inf
    return tuple(sorted(chosen))
