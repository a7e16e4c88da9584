from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from respmon.cf_calculus import (
    CFScale,
    DegenerateEvidenceError,
    EmptyPremiseError,
    PriorBelief,
    RangeViolation,
    certainty_factor,
    combine_all,
    combine_incremental,
    interpret_cf,
    measure_of_belief,
    measure_of_disbelief,
    propagate_conjunctive,
    propagate_disjunctive,
)

unit = st.floats(0.0, 1.0, allow_nan=False)
cf = st.floats(-1.0, 1.0, allow_nan=False)
pos_cf = st.floats(0.0, 1.0, allow_nan=False)
neg_cf = st.floats(-1.0, -1e-9, allow_nan=False)


@pytest.mark.parametrize(
    "h, he, expected",
    [
        (1.0, 0.3, 1.0),
        (0.3, 0.3, 0.0),
        # (0.6 - 0.2) / (1 - 0.2)
        (0.2, 0.6, float((Fraction(3, 5) - Fraction(1, 5)) / (1 - Fraction(1, 5)))),
    ],
)
def test_measure_of_belief(h, he, expected):
    assert measure_of_belief(h, he) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "h, he, expected",
    [
        (0.0, 0.7, 1.0),
        (0.3, 0.3, 0.0),
        # (0.2 - 0.5) / (-0.5)
        (0.5, 0.2, float((Fraction(1, 5) - Fraction(1, 2)) / -Fraction(1, 2))),
    ],
)
def test_measure_of_disbelief(h, he, expected):
    assert measure_of_disbelief(h, he) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("fn", [measure_of_belief, measure_of_disbelief])
@pytest.mark.parametrize("h, he", [(-0.1, 0.5), (0.5, 1.2), (1.01, 0.0)])
def test_measures_reject_out_of_range(fn, h, he):
    with pytest.raises(RangeViolation):
        fn(h, he)


def test_prior_belief_bundle():
    prior = PriorBelief(h=0.2, he=0.6)
    assert prior.belief() == pytest.approx(0.5)
    assert prior.disbelief() == 0.0
    assert prior.certainty() == pytest.approx(0.5)
    with pytest.raises(RangeViolation):
        PriorBelief(h=2, he=0)


@pytest.mark.parametrize("b, d, expected", [(1, 0, 1), (0, 1, -1), (0.7, 0.2, 0.5)])
def test_certainty_factor(b, d, expected):
    assert certainty_factor(b, d) == pytest.approx(expected)


def test_certainty_factor_range():
    with pytest.raises(RangeViolation):
        certainty_factor(1.5, 0)


def test_combine_examples():
    assert combine_incremental(0.5, 0.5) == pytest.approx(0.75, abs=1e-15)
    assert combine_incremental(0.42, 0) == 0.42
    # (0.6 - 0.4) / (1 - 0.4) = 1/3
    assert combine_incremental(0.6, -0.4) == pytest.approx(1 / 3, abs=1e-12)
    assert combine_incremental(-0.5, -0.5) == pytest.approx(-0.75)


def test_combine_degenerate():
    with pytest.raises(DegenerateEvidenceError):
        combine_incremental(1.0, -1.0)
    with pytest.raises(DegenerateEvidenceError):
        combine_incremental(-1.0, 1.0)


def test_combine_all_folds():
    assert combine_all([0.5, 0.5, 0.5]) == pytest.approx(0.875)
    assert combine_all([]) == 0.0


def test_propagation_examples():
    assert propagate_conjunctive([0.5, 0.25]) == 0.25
    assert propagate_conjunctive([0.8]) == 0.8
    assert propagate_conjunctive([0.2, -0.1, 0.9]) == -0.1
    assert propagate_disjunctive([0.5, 0.25]) == 0.5
    assert propagate_disjunctive([0.2, 0.25, 0.25]) == 0.25
    assert propagate_disjunctive([0.1]) == 0.1


@pytest.mark.parametrize("fn", [propagate_conjunctive, propagate_disjunctive])
def test_propagation_empty(fn):
    with pytest.raises(EmptyPremiseError):
        fn([])


@pytest.mark.parametrize(
    "value, label",
    [
        (1.0, "definitely true"),
        (0.0, "unknown"),
        (-1.0, "definitely false"),
        (0.2, "unknown"),
        (-0.2, "unknown"),
        (0.21, "probably true"),
        (0.99, "probably true"),
        (-0.5, "probably false"),
    ],
)
def test_interpret_cf(value, label):
    assert interpret_cf(value) == label


def test_interpret_cf_configurable():
    assert interpret_cf(0.3, CFScale(cutoff=0.5)) == "unknown"
    with pytest.raises(RangeViolation):
        CFScale(cutoff=1.0)


@given(unit, unit)
def test_measures_bounded_and_exclusive(h, he):
    b = measure_of_belief(h, he)
    d = measure_of_disbelief(h, he)
    assert 0 <= b <= 1 and 0 <= d <= 1
    if 0 < h < 1:
        assert (b > 0) == (he > h)
        assert (d > 0) == (he < h)
        assert not (b > 0 and d > 0)


@given(cf, cf)
def test_combine_commutative_and_bounded(a, b):
    if {a, b} == {1.0, -1.0}:
        return
    r = combine_incremental(a, b)
    assert -1 <= r <= 1
    assert r == pytest.approx(combine_incremental(b, a), abs=1e-15)


@given(cf)
def test_combine_identity(a):
    assert combine_incremental(a, 0.0) == a
    assert combine_incremental(0.0, a) == a


@settings(max_examples=300)
@given(st.one_of(st.tuples(pos_cf, pos_cf, pos_cf), st.tuples(neg_cf, neg_cf, neg_cf)))
def test_combine_same_sign_associative(t):
    a, b, c = t
    left = combine_incremental(combine_incremental(a, b), c)
    right = combine_incremental(a, combine_incremental(b, c))
    assert abs(left - right) <= 1e-12


@given(pos_cf, pos_cf, pos_cf)
def test_combine_positive_monotone(a, b, b2):
    lo, hi = sorted((b, b2))
    assert combine_incremental(a, lo) <= combine_incremental(a, hi) + 1e-15
    assert combine_incremental(a, b) >= max(a, b) - 1e-15


@given(st.lists(cf, min_size=1, max_size=12))
def test_propagation_matches_min_max(values):
    lo = values[0]
    hi = values[0]
    for v in values:
        lo = v if v < lo else lo
        hi = v if v > hi else hi
    assert propagate_conjunctive(values) == lo
    assert propagate_disjunctive(values) == hi
