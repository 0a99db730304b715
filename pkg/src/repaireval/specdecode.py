"""Closed-form and simulated throughput of prompt-reuse speculative editing.

When a fixer model rewrites a mostly-unchanged program, a draft stage can
propose runs of lines copied from the buggy source and let the verifier
accept them in bulk. Modeling per-line acceptance as independent with
rate R = 1 - edit_cost gives, for a draft window of K lines, an expected
(1 - R^(K+1)) / (1 - R) tokens per verification step: the geometric
series that the closed forms and both simulators below agree on.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, EmptySource
from .normalize import lines_of

__all__ = [
    "DEFAULT_NGRAM",
    "DEFAULT_WINDOW",
    "SpecDecodeProfile",
    "SimTrace",
    "acceptance_rate",
    "acceptance_from_edit_cost",
    "expected_tokens",
    "throughput_factor",
    "profile",
    "simulate_geometric",
    "simulate_prompt_lookup",
    "sim_standard_error",
]

DEFAULT_NGRAM = 2
DEFAULT_WINDOW = 8


@dataclass(frozen=True)
class SpecDecodeProfile:
    """Closed-form speedup profile for one (edit cost, window) point."""

    d_ec: float
    window: int
    acceptance: float
    expected_tokens: float
    relative_throughput: float


@dataclass(frozen=True)
class SimTrace:
    """Aggregate counts from a simulator run.

    empirical_acceptance is accepted_tokens / draft_tokens (0.0 when no
    tokens were drafted); empirical_expected_tokens is emitted tokens per
    verification step. tokens_squared_sum accumulates the square of each
    step's emitted tokens so callers can form a standard error without
    keeping per-step arrays.
    """

    trials: int
    accepted_tokens: int
    draft_tokens: int
    empirical_acceptance: float
    empirical_expected_tokens: float
    tokens_squared_sum: int = 0
    seed: "int | None" = None


def acceptance_rate(accepted_tokens: int, draft_tokens: int) -> float:
    """Observed acceptance: accepted / drafted, with 0/0 defined as 0.0."""
    if draft_tokens == 0:
        return 0.0
    if accepted_tokens < 0 or accepted_tokens > draft_tokens:
        raise DomainError(
            f"accepted tokens {accepted_tokens} must lie in [0, {draft_tokens}]"
        )
    return accepted_tokens / draft_tokens


def acceptance_from_edit_cost(d_ec: float) -> float:
    """Acceptance rate R = 1 - d_ec; the edit cost must lie in [0, 1]."""
    d = float(d_ec)
    if not 0.0 <= d <= 1.0:
        raise DomainError(
            f"edit cost {d} is outside [0, 1]; the acceptance model only "
            "covers programs no longer than their source rewrite"
        )
    return 1.0 - d


def expected_tokens(r: float, k: int) -> float:
    """Expected tokens per step, (1 - r^(k+1)) / (1 - r); r=1 gives k+1."""
    r = float(r)
    if r == 1.0:
        return float(k + 1)
    return (1.0 - r ** (k + 1)) / (1.0 - r)


def throughput_factor(d_ec: float, k: int, limit_at_zero: bool = False) -> float:
    """Relative throughput f(d, k) = (1 - (1-d)^(k+1)) / d.

    Strictly decreasing in d on (0, 1]. d=0 is a pole: raises DomainError
    unless limit_at_zero is set, which returns the limit k+1.
    """
    d = float(d_ec)
    if d == 0.0:
        if limit_at_zero:
            return float(k + 1)
        raise DomainError(
            "throughput_factor has a pole at edit cost 0; pass "
            "limit_at_zero=True for the k+1 limit"
        )
    if not 0.0 < d <= 1.0:
        raise DomainError(f"edit cost {d} is outside (0, 1]")
    return (1.0 - (1.0 - d) ** (k + 1)) / d


def profile(d_ec: float, window: int = DEFAULT_WINDOW) -> SpecDecodeProfile:
    """Closed-form profile for one operating point; d_ec must be in (0, 1]."""
    f = throughput_factor(d_ec, window)
    return SpecDecodeProfile(
        d_ec=float(d_ec),
        window=int(window),
        acceptance=acceptance_from_edit_cost(d_ec),
        expected_tokens=f,
        relative_throughput=f,
    )


def simulate_geometric(r: float, k: int, steps: int, seed: int) -> SimTrace:
    """Monte Carlo check of the geometric acceptance model.

    Each step draws k uniforms; the leading run below r is accepted and
    one extra token is always emitted. r must lie in [0, 1] and steps
    must be positive. Deterministic given the seed, and identical across
    kernel backends because the uniforms are drawn outside the kernel.
    """
    rng = np.random.default_rng(seed)
    u = rng.random((int(steps), int(k)))
    accepted, tokens, tokens_sq = _kernels.geometric_counts(u, float(r))
    draft = int(steps) * int(k)
    return SimTrace(
        trials=int(steps),
        accepted_tokens=accepted,
        draft_tokens=draft,
        empirical_acceptance=acceptance_rate(accepted, draft),
        empirical_expected_tokens=tokens / int(steps),
        tokens_squared_sum=tokens_sq,
        seed=int(seed),
    )


def simulate_prompt_lookup(buggy, fixed, ngram: int = DEFAULT_NGRAM, window: int = DEFAULT_WINDOW) -> SimTrace:
    """Deterministic line-level prompt-lookup decoding walk.

    Walks the fixed program; at each step the longest suffix n-gram of the
    already-emitted lines (length min(ngram, emitted) down to 1) is looked
    up in the buggy program. Among occurrences, the first one at or after
    a forward cursor (where the previous draft left off) wins, falling
    back to the global first occurrence; the forward preference keeps an
    unchanged program at acceptance exactly 1 even when lines repeat. The
    following `window` buggy lines become the draft, the matching prefix
    is accepted, and one more line is always emitted. No RNG is involved.
    """
    src = lines_of(buggy)
    tgt = lines_of(fixed)
    if not src or not tgt:
        raise EmptySource("prompt-lookup simulation needs non-empty programs")
    ngram = int(ngram)
    window = int(window)
    occ: list[dict] = [dict() for _ in range(ngram)]
    for glen in range(1, ngram + 1):
        d = occ[glen - 1]
        for j in range(len(src) - glen + 1):
            d.setdefault(src[j : j + glen], []).append(j)
    emitted = 0
    accepted = 0
    drafted = 0
    steps = 0
    tokens_sq = 0
    cursor = 0  # src position the next draft is expected to start at
    while emitted < len(tgt):
        steps += 1
        draft: tuple = ()
        start = 0
        for glen in range(min(ngram, emitted), 0, -1):
            gram = tgt[emitted - glen : emitted]
            js = occ[glen - 1].get(gram)
            if js:
                pos = bisect.bisect_left(js, cursor - glen)
                j = js[pos] if pos < len(js) else js[0]
                start = j + glen
                draft = src[start : start + window]
                break
        if draft:
            drafted += len(draft)
            ok = 0
            for off, line in enumerate(draft):
                if emitted + off < len(tgt) and tgt[emitted + off] == line:
                    ok += 1
                else:
                    break
            accepted += ok
            emitted += ok + 1
            cursor = start + ok + 1
            tokens_sq += (ok + 1) * (ok + 1)
        else:
            emitted += 1
            cursor += 1
            tokens_sq += 1
    return SimTrace(
        trials=steps,
        accepted_tokens=accepted,
        draft_tokens=drafted,
        empirical_acceptance=acceptance_rate(accepted, drafted),
        empirical_expected_tokens=len(tgt) / steps,
        tokens_squared_sum=tokens_sq,
        seed=None,
    )


def sim_standard_error(trace: SimTrace) -> float:
    """Standard error of the per-step emitted-token mean."""
    mean = trace.empirical_expected_tokens
    var = trace.tokens_squared_sum / trace.trials - mean * mean
    return math.sqrt(max(var, 0.0) / trace.trials)
