"""Sequence edit distance and size-normalized edit cost.

The edit cost of rewriting X into Y is Levenshtein(X, Y) / |X|: the
distance is unit-cost over whole lines (or tokens), normalized by the
length of the source only. It is therefore asymmetric and can exceed 1
when Y is much longer than X; values are kept as exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import EmptySource
from .normalize import NormalizedProgram, lines_of, tokens_of

__all__ = [
    "EditCostResult",
    "levenshtein",
    "levenshtein_script",
    "edit_cost",
    "edit_cost_sequences",
]


@dataclass(frozen=True)
class EditCostResult:
    """Distance plus the exact normalized cost distance/source_length."""

    distance: int
    source_length: int
    edit_cost: Fraction
    granularity: str

    @property
    def edit_cost_float(self) -> float:
        return float(self.edit_cost)


def _encode_pair(x: Sequence[str], y: Sequence[str]):
    # Map items to dense int ids shared across both sequences; the DP only
    # ever tests equality, so ids preserve the distance exactly.
    ids: dict[str, int] = {}

    def enc(seq):
        out = np.empty(len(seq), dtype=np.int64)
        for i, item in enumerate(seq):
            out[i] = ids.setdefault(item, len(ids))
        return out

    return enc(x), enc(y)


def levenshtein(x: Sequence[str], y: Sequence[str]) -> int:
    """Unit-cost edit distance between two string sequences (symmetric)."""
    a, b = _encode_pair(x, y)
    return int(_kernels.levenshtein_ids(a, b))


def levenshtein_script(x: Sequence[str], y: Sequence[str]):
    """Distance plus one optimal edit script, for diagnostics.

    Keeps the full O(len(x)*len(y)) matrix, so use the plain levenshtein()
    for bulk work. Ops are ("equal"|"replace"|"delete"|"insert", i, j)
    where i indexes x and j indexes y; ties resolve replace, then delete,
    then insert, so the script is deterministic.
    """
    x = list(x)
    y = list(y)
    n, m = len(x), len(y)
    dp = np.zeros((n + 1, m + 1), dtype=np.int64)
    dp[:, 0] = np.arange(n + 1)
    dp[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        xi = x[i - 1]
        for j in range(1, m + 1):
            dp[i, j] = min(
                dp[i - 1, j - 1] + (xi != y[j - 1]),
                dp[i - 1, j] + 1,
                dp[i, j - 1] + 1,
            )
    ops = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dp[i, j] == dp[i - 1, j - 1] + (x[i - 1] != y[j - 1]):
            ops.append(("equal" if x[i - 1] == y[j - 1] else "replace", i - 1, j - 1))
            i -= 1
            j -= 1
        elif i > 0 and dp[i, j] == dp[i - 1, j] + 1:
            ops.append(("delete", i - 1, j))
            i -= 1
        else:
            ops.append(("insert", i, j - 1))
            j -= 1
    ops.reverse()
    return int(dp[n, m]), ops


def edit_cost_sequences(
    x: Sequence[str], y: Sequence[str], granularity: str = "line"
) -> EditCostResult:
    """Edit cost between two raw item sequences; x must be non-empty."""
    x = tuple(x)
    y = tuple(y)
    if not x:
        raise EmptySource(f"source has no {granularity}s to normalize the distance by")
    d = levenshtein(x, y)
    return EditCostResult(
        distance=d,
        source_length=len(x),
        edit_cost=Fraction(d, len(x)),
        granularity=granularity,
    )


def edit_cost(
    x: NormalizedProgram, y: NormalizedProgram, granularity: str = "line"
) -> EditCostResult:
    """Edit cost between two normalized programs at line or token grain."""
    if granularity == "line":
        xs, ys = lines_of(x), lines_of(y)
    elif granularity == "token":
        xs, ys = tokens_of(x), tokens_of(y)
    else:
        raise ValueError(f"granularity must be 'line' or 'token', got {granularity!r}")
    return edit_cost_sequences(xs, ys, granularity)
