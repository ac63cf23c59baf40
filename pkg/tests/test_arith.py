from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from dinv.arith import (
    OmegaWitness,
    cf_eval,
    chain_is_negative_definite,
    exception_count,
    format_cf,
    format_rational,
    negative_expansion,
    omega_check,
    parse_cf,
    parse_rational,
)
from dinv.errors import InvalidInput, OutOfRange, ZeroTail


def test_cf_eval_examples():
    assert cf_eval([-5]) == -5
    assert cf_eval([-3, -2, -2]) == Fraction(-7, 3)
    assert cf_eval([-2, -2, -2]) == Fraction(-4, 3)


def test_cf_eval_zero_tail():
    assert cf_eval([0]) == 0
    with pytest.raises(ZeroTail):
        cf_eval([2, 0])
    with pytest.raises(ZeroTail):
        cf_eval([3, 1, 1])


def test_negative_expansion_examples():
    assert negative_expansion(Fraction(-5)) == (-5,)
    assert negative_expansion(Fraction(-7, 3)) == (-3, -2, -2)
    assert negative_expansion(Fraction(-1)) == (-1,)
    with pytest.raises(OutOfRange):
        negative_expansion(Fraction(-1, 2))


def test_exception_count_examples():
    assert exception_count([-3, -2, -2]) == 0
    assert exception_count([-1, -2, -1]) == 0
    assert exception_count([0, 2]) == 2
    assert exception_count([-2, -1, -2]) == 1


def test_omega_examples():
    assert omega_check(Fraction(-7)).cf == (-7,)
    w = omega_check(Fraction(-7, 3))
    assert w.cf == (-3, -2, -2) and w.exception_indices == ()
    assert omega_check(Fraction(-3, 2)).cf == (-2, -2)


def test_omega_between_minus_one_and_zero():
    w = omega_check(Fraction(-1, 2))
    assert w is not None and w.value == Fraction(-1, 2) and w.is_valid()


def test_omega_positive_is_not_found():
    # a negative definite chain always evaluates to a negative number
    assert omega_check(Fraction(3, 2)) is None


def test_indefinite_chain_is_not_a_witness():
    assert not chain_is_negative_definite([0, 2])
    assert not OmegaWitness((0, 2), (0, 1)).is_valid()


@given(st.integers(1, 200), st.integers(1, 200))
def test_expansion_round_trip(p, q):
    if q > p or gcd(p, q) != 1:
        return
    r = Fraction(-p, q)
    cf = negative_expansion(r)
    assert cf_eval(cf) == r
    assert len(cf) <= p
    assert all(a <= -2 for a in cf) or cf == (-1,)
    w = omega_check(r)
    assert w.is_valid() and w.value == r


@given(st.integers(-40, 40), st.integers(1, 40))
def test_rational_text_round_trip(n, d):
    r = Fraction(n, d)
    assert parse_rational(format_rational(r)) == r
    assert parse_rational(format_rational(r).replace("-", "−")) == r


def test_rational_formats():
    assert format_rational(Fraction(-2)) == "-2/1"
    assert format_rational(Fraction(-2), always_slash=False) == "-2"
    with pytest.raises(InvalidInput):
        parse_rational("1/0")
    with pytest.raises(InvalidInput):
        parse_rational("x")


def test_cf_text():
    assert parse_cf(format_cf((-3, -2, -2))) == (-3, -2, -2)
    with pytest.raises(InvalidInput):
        parse_cf("-3,-2")
