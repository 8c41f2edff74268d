import warnings
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from mfw.errors import NonIntegral, PreconditionError
from mfw.series import IntSeries, dim_from_gv, gv_expand, gv_invert, parse_series


def test_expand_5_1():
    s = gv_expand((5, 1), 12)
    expected = parse_series("(1+t)^5*(1-t^2)^2", 12)
    assert s == expected
    assert s.degree() == 9 and s[9] == 1 and s[1] == 5


@pytest.mark.parametrize("k", [1, 2, 3, 6])
def test_expand_single_invariant_is_binomial(k):
    s = gv_expand((k,), k + 3)
    assert s.to_list() == [comb(k, j) for j in range(k + 4)]


def test_trivial_cases():
    assert gv_expand(()).to_list() == [1]
    assert gv_invert(IntSeries([1], 6)) == ()
    assert dim_from_gv(()) == 0


def test_invert_examples():
    assert gv_invert(gv_expand((5, 1), 12)) == (5, 1)
    assert gv_invert(parse_series("(1+t)^3", 8)) == (3,)


def test_dim_formula():
    assert dim_from_gv((5, 1)) == 9
    for k in range(1, 6):
        assert dim_from_gv((k,)) == k
    assert dim_from_gv((0, 0, 1)) == 9


def test_non_integral_and_negative():
    with pytest.raises(NonIntegral):
        gv_invert(IntSeries([1, 1, 1]))       # forces n_2 = -1/2
    with pytest.raises(PreconditionError):
        gv_invert(IntSeries([2, 1]))
    with pytest.warns(UserWarning):
        assert gv_invert(gv_expand((2, -1), 10)) == (2, -1)


def test_series_arithmetic_truncates():
    a = IntSeries([1, 1], 3)
    assert (a * a * a * a).to_list() == [1, 4, 6, 4]
    assert (a + a).to_list() == [2, 2, 0, 0]
    assert (a - 1).to_list() == [0, 1, 0, 0]


ns = st.lists(st.integers(0, 3), max_size=4)


@settings(max_examples=80, deadline=None)
@given(ns)
def test_round_trip(n):
    n = tuple(n)
    T = sum((j + 1) ** 2 * x for j, x in enumerate(n)) + 2
    trimmed = list(n)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
    assert gv_invert(gv_expand(n, T)) == tuple(trimmed)


@settings(max_examples=80, deadline=None)
@given(ns)
def test_degree_and_top_coefficient(n):
    d = dim_from_gv(n)
    s = gv_expand(n, d + 3)
    assert s.degree() == d
    assert abs(s[d]) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-2, 3), min_size=1, max_size=4))
def test_round_trip_with_negative_entries(n):
    T = sum((j + 1) ** 2 * abs(x) for j, x in enumerate(n)) + 4
    trimmed = list(n)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert gv_invert(gv_expand(n, T)) == tuple(trimmed)
