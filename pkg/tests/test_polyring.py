from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mfw.errors import RingMismatch
from mfw.expr import ParseError
from mfw.polyring import (
    GLOBAL, LOCAL, Poly, RingSpec, coefficient_of, format_poly, parse_poly, partial_derivative,
    poly_arith, substitute,
)

R = RingSpec(("x", "y", "z"))


def polys(ring=R, max_terms=5, max_exp=3):
    mono = st.tuples(*[st.integers(0, max_exp)] * ring.nvars)
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(mono, coeff, max_size=max_terms).map(lambda t: Poly(ring, t))


def test_parse_and_print_round_trip():
    f = parse_poly("(x+y)^3 - 1/2*x*y + 7", R)
    assert format_poly(f) == "x^3 + 3*x^2*y + 3*x*y^2 + y^3 - 1/2*x*y + 7"
    assert parse_poly(format_poly(f), R) == f
    assert coefficient_of(f, (1, 1, 0)) == Fraction(-1, 2)


def test_zero_and_cancellation():
    f = parse_poly("x*y - y*x", R)
    assert not f
    assert format_poly(f) == "0"


@pytest.mark.parametrize("text", ["2x", "x^", "x +* y", "(x", "q", "x^-1"])
def test_parse_errors_report_position(text):
    with pytest.raises(ParseError) as info:
        parse_poly(text, R)
    assert 0 <= info.value.position <= len(text)


def test_ordering_changes_leading_monomial():
    f = parse_poly("x^3 + x*y", R)
    assert f.lm() == (3, 0, 0)
    assert f.in_ring(R.with_ordering(LOCAL)).lm() == (1, 1, 0)


def test_ring_mismatch():
    S = RingSpec(("u", "v"))
    with pytest.raises(RingMismatch):
        parse_poly("x", R) + parse_poly("u", S)


def test_partial_derivative_and_substitute():
    f = parse_poly("x^3*y + z^2", R)
    assert partial_derivative(f, 0) == parse_poly("3*x^2*y", R)
    assert partial_derivative(f, 2) == parse_poly("2*z", R)
    g = substitute(f, [parse_poly("y", R), parse_poly("x", R), R.one()])
    assert g == parse_poly("y^3*x + 1", R)


def test_poly_arith_dispatch():
    a, b = parse_poly("x + 1", R), parse_poly("y", R)
    assert poly_arith("mul", a, b) == parse_poly("x*y + y", R)
    assert poly_arith("pow", a, 2) == parse_poly("x^2 + 2*x + 1", R)
    with pytest.raises(ValueError):
        poly_arith("div", a, b)


def test_bad_ring():
    with pytest.raises(ValueError):
        RingSpec(("x", "x"))
    with pytest.raises(ValueError):
        RingSpec(("x",), "lex")
    assert RingSpec(("x",)).ordering == GLOBAL


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f - f == R.zero()


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_leibniz_rule(f, g):
    for i in range(3):
        assert partial_derivative(f * g, i) == partial_derivative(f, i) * g + f * partial_derivative(g, i)


@settings(max_examples=60, deadline=None)
@given(polys())
def test_print_parse_round_trip(f):
    assert parse_poly(format_poly(f), R) == f
