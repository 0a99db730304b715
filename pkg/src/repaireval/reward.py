"""Group-level rewards that trade correctness off against edit size.

A rollout group holds several candidate fixes for one buggy program.
Incorrect samples always score 0. When the group's accuracy reaches the
activation threshold alpha, correct samples are ranked against each other:
each pays a penalty beta * sigmoid(z) where z standardizes its edit cost
among the group's correct samples. Below the threshold every correct
sample scores a flat 1, so exploration is never punished while the group
is still struggling. Setting alpha above 1 can never activate, which
reduces the reward to plain correctness.

Advantages standardize rewards within the group (mean 0, unit spread);
a constant reward vector maps to all-zero advantages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .editcost import edit_cost_sequences
from .errors import DomainError, EmptyGroup, NoCorrectSamples
from .metrics import as_ratio
from .normalize import lines_of

__all__ = [
    "DEFAULT_ALPHA",
    "DEFAULT_BETA",
    "RolloutGroup",
    "RewardVector",
    "AdvantageVector",
    "group_accuracy",
    "threshold_gate",
    "edit_penalties",
    "rewards",
    "advantages",
]

DEFAULT_ALPHA = Fraction(4, 5)
DEFAULT_BETA = Fraction(1, 20)


@dataclass(frozen=True)
class RolloutGroup:
    """One buggy program and its sampled candidate fixes.

    samples are (output, correct) pairs in sampling order; outputs are
    normalized programs or raw line sequences. alpha in [0, 1.1] is the
    activation threshold (above 1 = never activates); beta in [0, 1] is
    the penalty strength (capped at 1 so rewards stay in [0, 1]).
    """

    buggy: object
    samples: tuple
    alpha: Fraction = DEFAULT_ALPHA
    beta: Fraction = DEFAULT_BETA

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple((out, bool(ok)) for out, ok in self.samples))
        alpha = as_ratio(self.alpha)
        beta = as_ratio(self.beta)
        if not Fraction(0) <= alpha <= Fraction(11, 10):
            raise DomainError(f"alpha must be in [0, 1.1], got {alpha}")
        if not Fraction(0) <= beta <= Fraction(1):
            raise DomainError(f"beta must be in [0, 1], got {beta}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class RewardVector:
    """Per-sample rewards in sampling order.

    penalties holds the sigmoid penalty for correct samples in activated
    groups and None elsewhere; activated is the raw threshold gate.
    """

    rewards: tuple
    penalties: tuple
    activated: bool
    group_accuracy: Fraction


@dataclass(frozen=True)
class AdvantageVector:
    """Group-standardized rewards in sampling order."""

    advantages: tuple


def group_accuracy(group: RolloutGroup) -> Fraction:
    """Fraction of correct samples; EmptyGroup when there are none."""
    if not group.samples:
        raise EmptyGroup("rollout group has no samples")
    correct = sum(1 for _, ok in group.samples if ok)
    return Fraction(correct, len(group.samples))


def threshold_gate(group: RolloutGroup) -> bool:
    """Whether accuracy reached alpha (boundary inclusive)."""
    return group_accuracy(group) >= group.alpha


def edit_penalties(group: RolloutGroup, std: str = "population") -> tuple:
    """Sigmoid-standardized edit costs over the correct samples, in order.

    Costs are line-level edit costs from the buggy program to each correct
    output. std picks the population or sample standard deviation; a
    degenerate spread (all costs equal, or a single correct sample) sends
    every z to 0, so every penalty is exactly 0.5. Raises
    NoCorrectSamples when nothing is correct.
    """
    if std not in ("population", "sample"):
        raise DomainError(f"std must be 'population' or 'sample', got {std!r}")
    src = lines_of(group.buggy)
    costs = [
        float(edit_cost_sequences(src, lines_of(out), "line").edit_cost)
        for out, ok in group.samples
        if ok
    ]
    if not costs:
        raise NoCorrectSamples("no correct samples to standardize over")
    n = len(costs)
    mu = sum(costs) / n
    denom = n if std == "population" else n - 1
    if denom <= 0:
        return (0.5,)
    var = sum((c - mu) ** 2 for c in costs) / denom
    sd = math.sqrt(var)
    if sd == 0.0:
        return tuple(0.5 for _ in costs)
    return tuple(_logistic((c - mu) / sd) for c in costs)


def rewards(group: RolloutGroup, std: str = "population") -> RewardVector:
    """Per-sample rewards; incorrect samples score 0 in every regime."""
    acc = group_accuracy(group)
    activated = acc >= group.alpha
    has_correct = any(ok for _, ok in group.samples)
    out = []
    pens = []
    if activated and has_correct:
        beta = float(group.beta)
        pen_iter = iter(edit_penalties(group, std))
        for _, ok in group.samples:
            if ok:
                p = next(pen_iter)
                pens.append(p)
                out.append(1.0 - beta * p)
            else:
                pens.append(None)
                out.append(0.0)
    else:
        for _, ok in group.samples:
            pens.append(None)
            out.append(1.0 if ok else 0.0)
    return RewardVector(tuple(out), tuple(pens), bool(activated), acc)


def advantages(reward_vector: RewardVector, std: str = "population") -> AdvantageVector:
    """Standardize rewards within the group; constant vectors map to zeros."""
    if std not in ("population", "sample"):
        raise DomainError(f"std must be 'population' or 'sample', got {std!r}")
    r = reward_vector.rewards
    n = len(r)
    if n == 0:
        return AdvantageVector(())
    mu = sum(r) / n
    denom = n if std == "population" else n - 1
    if denom <= 0:
        return AdvantageVector((0.0,) * n)
    sd = math.sqrt(sum((x - mu) ** 2 for x in r) / denom)
    if sd == 0.0:
        return AdvantageVector((0.0,) * n)
    return AdvantageVector(tuple((x - mu) / sd for x in r))


def _logistic(z: float) -> float:
    # split on sign so exp never overflows
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)
