import random
from fractions import Fraction

import pytest

from oracles import at_k_exhaustive, mean_fraction
from repaireval.errors import DomainError, GoldenIsIdentical, InconsistentN
from repaireval.metrics import (
    CandidateOutcome,
    TaskOutcomes,
    as_ratio,
    at_k_estimator,
    fix_count,
    report,
)


def outcome(correct, cand, gold="1/5"):
    return CandidateOutcome(correct, Fraction(cand), Fraction(gold))


def test_estimator_small_example():
    assert at_k_estimator(4, 2, 2) == Fraction(5, 6)


def test_estimator_reference_points():
    # frozen from the exhaustive-enumeration oracle: 1 - C(10,5)/C(20,5)
    # and 1 - C(15,5)/C(20,5)
    assert at_k_estimator(20, 10, 5) == Fraction(15252, 15504)
    assert at_k_estimator(20, 5, 5) == Fraction(12501, 15504)
    assert abs(float(at_k_estimator(20, 10, 5)) - 0.98374) < 1e-5
    assert abs(float(at_k_estimator(20, 5, 5)) - 0.80631) < 1e-5


def test_estimator_edges():
    assert at_k_estimator(10, 0, 3) == 0
    assert at_k_estimator(10, 10, 1) == 1
    assert at_k_estimator(10, 1, 10) == 1  # k = n with any success
    assert at_k_estimator(7, 7, 7) == 1


def test_estimator_domain_errors():
    for n, c, k in [(0, 0, 1), (5, -1, 1), (5, 6, 1), (5, 2, 0), (5, 2, 6)]:
        with pytest.raises(DomainError):
            at_k_estimator(n, c, k)


def test_estimator_matches_exhaustive_enumeration():
    rng = random.Random(55)
    for _ in range(120):
        n = rng.randrange(1, 13)
        c = rng.randrange(0, n + 1)
        k = rng.randrange(1, n + 1)
        assert at_k_estimator(n, c, k) == at_k_exhaustive(n, c, k)


def test_estimator_large_n_no_overflow():
    v = at_k_estimator(10000, 5000, 100)
    assert Fraction(0) < v < Fraction(1)
    w = at_k_estimator(10000, 1, 1)
    assert w == Fraction(1, 10000)


def test_fix_count_boundary_inclusive():
    # candidate exactly at p * golden counts
    outs = [outcome(True, "3/10", "1/5")]  # ratio exactly 1.5
    assert fix_count(outs, Fraction(3, 2)) == 1
    assert fix_count(outs, as_ratio("1.49")) == 0


def test_fix_count_needs_correctness():
    outs = [outcome(False, "1/5", "1/5"), outcome(True, "1/5", "1/5")]
    assert fix_count(outs, 1) == 1


def test_fix_count_golden_identical_rejected():
    with pytest.raises(GoldenIsIdentical):
        fix_count([outcome(True, "1/5", 0)], 1)


def test_fix_count_exact_rational_comparison():
    # 1/3 <= (1/3) * 1 must hold exactly; float arithmetic would wobble
    outs = [CandidateOutcome(True, Fraction(1, 3), Fraction(1, 3))]
    assert fix_count(outs, 1) == 1


def rand_outcomes(rng, n):
    gold = Fraction(rng.randrange(1, 6), 10)
    return [
        CandidateOutcome(
            rng.random() < 0.5,
            Fraction(rng.randrange(0, 30), 10),
            gold,
        )
        for _ in range(n)
    ]


def test_fix_never_exceeds_pass_and_monotone_in_p():
    rng = random.Random(56)
    ps = [Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]
    for _ in range(200):
        outs = rand_outcomes(rng, 20)
        c_pass = sum(1 for o in outs if o.correct)
        counts = [fix_count(outs, p) for p in ps]
        assert all(c <= c_pass for c in counts)
        assert counts == sorted(counts)


def test_report_unweighted_mean():
    t1 = TaskOutcomes("a", tuple(outcome(i < 10, "1/5") for i in range(20)))
    t2 = TaskOutcomes("b", tuple(outcome(i < 4, "1/5") for i in range(20)))
    rep = report([t1, t2], ks=(5,), ps=(1,))
    want = mean_fraction([at_k_exhaustive(20, 10, 5), at_k_exhaustive(20, 4, 5)])
    assert rep.pass_at_k[5] == want
    # every candidate here sits exactly at the golden cost, so fix_1 == pass
    assert rep.fix_at_k[(Fraction(1), 5)] == want


def test_report_inconsistent_n():
    t1 = TaskOutcomes("a", tuple(outcome(True, "1/5") for _ in range(8)))
    t2 = TaskOutcomes("b", tuple(outcome(True, "1/5") for _ in range(9)))
    with pytest.raises(InconsistentN):
        report([t1, t2])


def test_report_validates_k_range_and_empty():
    t1 = TaskOutcomes("a", tuple(outcome(True, "1/5") for _ in range(4)))
    with pytest.raises(DomainError):
        report([t1], ks=(5,))
    with pytest.raises(DomainError):
        report([])


def test_report_label_order_stable():
    t1 = TaskOutcomes("a", tuple(outcome(i % 2 == 0, "1/5") for i in range(6)))
    rep = report([t1], ks=(5, 1), ps=(2, 1))
    labels = [lbl for lbl, _ in rep.labeled_values()]
    assert labels == ["pass@1", "pass@5", "fix_1@1", "fix_1@5", "fix_2@1", "fix_2@5"]


def test_as_ratio_decimal_semantics():
    assert as_ratio(0.1) == Fraction(1, 10)
    assert as_ratio("1.5") == Fraction(3, 2)
    assert as_ratio(2) == Fraction(2)
    assert as_ratio(Fraction(7, 4)) == Fraction(7, 4)
