from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from k3klein.expr import Space, UnknownSymbol
from k3klein.linalg import Matrix


def space():
    S = Space("T", ["a", "b", "c"], Matrix([[-2, 1, 0], [1, -2, 0], [0, 0, 4]]))
    S.define("h", "(a+b)/2")
    return S


def test_parse_arithmetic():
    S = space()
    assert S.parse("a-2*b+c/3") == (1, -2, Fraction(1, 3))
    assert S.parse("3*(a-b)/4") == (Fraction(3, 4), Fraction(-3, 4), 0)
    assert S.parse("h+c") == (Fraction(1, 2), Fraction(1, 2), 1)
    assert S.square(S["c"]) == 4


def test_parse_errors():
    S = space()
    with pytest.raises(UnknownSymbol):
        S.parse("a+z")
    with pytest.raises(ValueError):
        S.parse("a*b")
    with pytest.raises(ValueError):
        S.parse("__import__('os')")


@given(st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=6), min_size=3, max_size=3))
def test_format_parse_round_trip(coeffs):
    S = space()
    v = tuple(coeffs)
    assert S.parse(S.format(v)) == v
