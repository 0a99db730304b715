"""Unbiased @k estimation and the cost-bounded repair metric.

pass@k asks whether any of k drawn candidates is correct; the fix variant
additionally requires the candidate's edit cost to stay within a factor p
of the golden fix's edit cost. Both use the exact unbiased estimator
1 - C(n-c, k)/C(n, k) over n candidates with c qualifying, evaluated with
rational arithmetic so nothing is lost to floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, GoldenIsIdentical, InconsistentN

__all__ = [
    "as_ratio",
    "format_ratio",
    "CandidateOutcome",
    "TaskOutcomes",
    "MetricReport",
    "at_k_estimator",
    "fix_count",
    "report",
]

DEFAULT_KS = (1, 5, 10)
DEFAULT_PS = (Fraction(1), Fraction(3, 2), Fraction(2))


def as_ratio(value) -> Fraction:
    """Exact Fraction from int, str, or Fraction.

    Floats convert through their shortest decimal repr, so as_ratio(0.1)
    is exactly 1/10 (the value the user typed, not the binary float).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value))


def format_ratio(p: Fraction) -> str:
    """Short stable label for a ratio: '1', '1.5', or 'num/den'."""
    if p.denominator == 1:
        return str(p.numerator)
    f = float(p)
    if Fraction(repr(f)) == p:
        return repr(f)
    return f"{p.numerator}/{p.denominator}"


@dataclass(frozen=True)
class CandidateOutcome:
    """One candidate's verdict and its edit cost next to the golden cost."""

    correct: bool
    candidate_edit_cost: Fraction
    golden_edit_cost: Fraction

    def __post_init__(self):
        object.__setattr__(self, "candidate_edit_cost", as_ratio(self.candidate_edit_cost))
        object.__setattr__(self, "golden_edit_cost", as_ratio(self.golden_edit_cost))


@dataclass(frozen=True)
class TaskOutcomes:
    """All candidate outcomes for one task."""

    task_id: str
    outcomes: tuple[CandidateOutcome, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))


@dataclass(frozen=True)
class MetricReport:
    """Aggregated metrics: exact rationals keyed by k and by (p, k)."""

    n: int
    task_count: int
    ks: tuple[int, ...]
    ps: tuple[Fraction, ...]
    pass_at_k: dict
    fix_at_k: dict

    def labeled_values(self):
        """(label, Fraction) pairs in stable order: pass block then fix blocks."""
        out = [(f"pass@{k}", self.pass_at_k[k]) for k in self.ks]
        for p in self.ps:
            for k in self.ks:
                out.append((f"fix_{format_ratio(p)}@{k}", self.fix_at_k[(p, k)]))
        return out


def at_k_estimator(n: int, c: int, k: int) -> Fraction:
    """Exact unbiased estimate 1 - C(n-c, k)/C(n, k).

    Telescoping product of (n-c-i)/(n-i), so no binomial blowup; safe for
    n up to 10000 and beyond. Raises DomainError unless
    0 <= c <= n, 1 <= k <= n.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= c <= n:
        raise DomainError(f"c must be in [0, n] = [0, {n}], got {c}")
    if not 1 <= k <= n:
        raise DomainError(f"k must be in [1, n] = [1, {n}], got {k}")
    if n - c < k:
        return Fraction(1)
    miss = Fraction(1)
    for i in range(k):
        miss *= Fraction(n - c - i, n - i)
    return 1 - miss


def fix_count(outcomes: Iterable[CandidateOutcome], p) -> int:
    """Count candidates that are correct and within p times the golden cost.

    The ratio test candidate_cost <= p * golden_cost is exact rational
    arithmetic, boundary inclusive. Raises GoldenIsIdentical when a
    golden edit cost is zero (the ratio is undefined; such records are
    rejected at ingestion).
    """
    tol = as_ratio(p)
    count = 0
    for o in outcomes:
        if o.golden_edit_cost == 0:
            raise GoldenIsIdentical("golden fix has zero edit cost; ratio undefined")
        if o.correct and o.candidate_edit_cost <= tol * o.golden_edit_cost:
            count += 1
    return count


def report(
    tasks: Sequence[TaskOutcomes],
    ks: Iterable[int] = DEFAULT_KS,
    ps: Iterable = DEFAULT_PS,
) -> MetricReport:
    """Aggregate pass@k and fix_p@k over tasks (unweighted task mean).

    Every task must expose the same candidate count n; k values must fit
    in [1, n]. Raises InconsistentN or DomainError accordingly.
    """
    tasks = list(tasks)
    if not tasks:
        raise DomainError("report needs at least one task")
    n = len(tasks[0].outcomes)
    for t in tasks:
        if len(t.outcomes) != n:
            raise InconsistentN(
                f"task {t.task_id!r} has {len(t.outcomes)} candidates, expected {n}"
            )
    ks = tuple(sorted({int(k) for k in ks}))
    ps = tuple(sorted({as_ratio(p) for p in ps}))
    if not ks:
        raise DomainError("no k values given")
    if not ps:
        raise DomainError("no p values given")
    pass_sums = {k: Fraction(0) for k in ks}
    fix_sums = {(p, k): Fraction(0) for p in ps for k in ks}
    for t in tasks:
        c_pass = sum(1 for o in t.outcomes if o.correct)
        for k in ks:
            pass_sums[k] += at_k_estimator(n, c_pass, k)
        for p in ps:
            c_fix = fix_count(t.outcomes, p)
            for k in ks:
                fix_sums[(p, k)] += at_k_estimator(n, c_fix, k)
    m = len(tasks)
    return MetricReport(
        n=n,
        task_count=m,
        ks=ks,
        ps=ps,
        pass_at_k={k: v / m for k, v in pass_sums.items()},
        fix_at_k={pk: v / m for pk, v in fix_sums.items()},
    )
