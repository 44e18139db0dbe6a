import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from decohist.coarse_grain import IntervalId, indicator, interval_bounds, interval_index
from decohist.model import Partition


@pytest.mark.parametrize(
    "alpha, origin, delta, bounds",
    [(0, 0.0, 1.0, (-0.5, 0.5)), (3, 0.0, 0.5, (1.25, 1.75)), (-1, 2.0, 1.0, (0.5, 1.5))],
)
def test_interval_bounds(alpha, origin, delta, bounds):
    assert interval_bounds(alpha, Partition(delta, origin)) == bounds
    assert IntervalId(alpha).bounds(Partition(delta, origin)) == bounds


@pytest.mark.parametrize(
    "xbar, alpha, expected",
    [(0.25, 0, 1), (0.5, 0, 1), (0.5, 1, 0), (-0.5, 0, 0), (-0.5, -1, 1)],
)
def test_indicator_half_open(xbar, alpha, expected):
    assert indicator(xbar, alpha, Partition(1.0)) == expected


@pytest.mark.parametrize(
    "xbar, delta, expected", [(0.25, 1.0, 0), (1.75, 0.5, 3), (10.1, 1.0, 10), (-0.5, 1.0, -1)]
)
def test_interval_index(xbar, delta, expected):
    assert interval_index(xbar, Partition(delta)) == expected


finite = st.floats(-1e4, 1e4, allow_nan=False)


@given(xbar=finite, delta=st.floats(1e-3, 1e3), origin=st.floats(-100, 100))
def test_exactly_one_interval_contains_each_point(xbar, delta, origin):
    p = Partition(delta, origin)
    a = interval_index(xbar, p)
    hits = [indicator(xbar, b, p) for b in range(a - 3, a + 4)]
    assert hits == [0, 0, 0, 1, 0, 0, 0]


@given(alpha=st.integers(-1000, 1000), k=st.integers(-6, 6))
def test_boundaries_belong_to_the_lower_interval(alpha, k):
    # dyadic length and origin keep the boundaries exactly representable
    p = Partition(2.0**k, 0.25)
    low, high = interval_bounds(alpha, p)
    assert interval_index(high, p) == alpha
    assert interval_index(low, p) == alpha - 1


@given(xbar=finite, a=st.integers(-50, 50), b=st.integers(-50, 50))
def test_product_rule(xbar, a, b):
    assume(a != b)
    p = Partition(0.7, 0.1)
    assert indicator(xbar, a, p) * indicator(xbar, b, p) == 0


@given(xbar=st.floats(-1000, 1000), k=st.integers(-4, 4))
def test_translation_covariance(xbar, k):
    p = Partition(2.0**k)
    # stay away from boundaries, where xbar + delta may round across one
    frac = (xbar / p.delta + 0.5) % 1.0
    assume(1e-9 < frac < 1 - 1e-9)
    assert interval_index(xbar + p.delta, p) == interval_index(xbar, p) + 1


def test_boundary_translation_on_dyadic_grid():
    p = Partition(0.5)
    for alpha in range(-20, 20):
        _, high = interval_bounds(alpha, p)
        assert interval_index(high + p.delta, p) == interval_index(high, p) + 1


def test_vectorised_membership_counts():
    p = Partition(0.3, -0.2)
    x = np.linspace(-5, 5, 2001)
    counts = np.zeros_like(x)
    for a in range(-30, 31):
        counts += [indicator(v, a, p) for v in x]
    assert np.all(counts == 1)
