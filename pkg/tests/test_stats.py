"""Descriptive-statistics unit: summaries, entropy, safe ratios."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fznfeat.stats import SENTINEL, ratio, shannon_entropy, stat_summary


def test_constant_multiset():
    s = stat_summary([4.0, 4.0, 4.0])
    assert s.values() == (4.0, 4.0, 4.0, 0.0, 0.0)


def test_two_value_multiset():
    s = stat_summary([1.0, 1.0, 2.0, 2.0])
    assert s.min == 1.0
    assert s.max == 2.0
    assert s.avg == 1.5
    assert math.isclose(s.cv, 0.5 / 1.5)
    assert math.isclose(s.ent, math.log(2))


def test_empty_multiset_is_all_sentinels():
    assert stat_summary([]).values() == (SENTINEL,) * 5


def test_zero_mean_cv_sentinel():
    s = stat_summary([-1.0, 1.0])
    assert s.avg == 0.0
    assert s.cv == SENTINEL


def test_entropy_uniform_is_log_k():
    values = [1.0, 2.0, 3.0, 1.0, 2.0, 3.0]
    assert math.isclose(shannon_entropy(values), math.log(3))


def test_ratio_zero_denominator():
    assert ratio(3.0, 0.0) == SENTINEL
    assert ratio(3.0, 2.0) == 1.5


finite = st.floats(
    allow_nan=False, allow_infinity=False, min_value=-1e6, max_value=1e6
)


@given(st.lists(finite, min_size=1, max_size=50))
def test_min_avg_max_ordering(xs):
    s = stat_summary(xs)
    assert s.min <= s.avg + 1e-9
    assert s.avg <= s.max + 1e-9


@given(st.lists(finite, min_size=1, max_size=50))
def test_entropy_nonnegative_and_bounded(xs):
    s = stat_summary(xs)
    assert s.ent >= -1e-12
    assert s.ent <= math.log(len(set(xs))) + 1e-9


@given(st.lists(finite, min_size=1, max_size=30), st.randoms())
def test_permutation_invariance_is_bitwise(xs, rnd):
    shuffled = list(xs)
    rnd.shuffle(shuffled)
    assert stat_summary(xs) == stat_summary(shuffled)


@given(st.floats(min_value=-1e5, max_value=1e5, allow_nan=False), st.integers(1, 40))
def test_constant_multiset_entropy_zero(value, n):
    s = stat_summary([value] * n)
    assert s.ent == 0.0
    assert s.min == s.max == value
    # The mean of n copies can be one rounding step away from the value.
    assert math.isclose(s.avg, value, rel_tol=1e-15, abs_tol=1e-300)


def test_summary_values_rejects_nothing():
    with pytest.raises(TypeError):
        stat_summary(None)
