from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fewnomials.intervals import Interval, one_minus


def _mp(endpoint):
    num, den = endpoint.as_integer_ratio()
    return mpmath.mpf(int(num)) / int(den)


def test_from_fraction_encloses_value():
    x = Interval.from_fraction(Fraction(1, 3), 80)
    assert x.contains(Fraction(1, 3))
    assert x.relative_width() <= 2.0**-78


def test_mid_is_exact_rational():
    x = Interval.from_fractions(Fraction(1, 4), Fraction(1, 2))
    assert x.mid() == Fraction(3, 8)


def test_sign():
    assert Interval.from_fraction(Fraction(1, 7)).sign() == 1
    assert Interval.from_fraction(Fraction(-1, 7)).sign() == -1
    assert Interval.from_fractions(-1, 1).sign() == 0


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        Interval.from_fractions(1, 0)


def test_rational_power():
    # sqrt over [1/4, 1/2] is [1/2, 0.7071...]
    y = Interval.from_fractions(Fraction(1, 4), Fraction(1, 2), 80).pow_rational(Fraction(1, 2))
    assert y.contains(Fraction(1, 2))
    with mpmath.workprec(200):
        assert _mp(y.lo) == mpmath.mpf(0.5)
        assert _mp(y.lo) <= mpmath.sqrt(mpmath.mpf(1) / 2) <= _mp(y.hi)


def test_negative_power_of_interval_touching_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Interval.from_fractions(0, Fraction(1, 2)).pow_rational(Fraction(-1, 2))


def test_one_minus():
    x = Interval.from_fraction(Fraction(1, 4), 64)
    assert one_minus(x).contains(Fraction(3, 4))


fracs = st.fractions(min_value=Fraction(1, 50), max_value=10, max_denominator=50)


@settings(max_examples=100, deadline=None)
@given(fracs, fracs)
def test_arithmetic_encloses_exact_result(a, b):
    A, B = Interval.from_fraction(a, 53), Interval.from_fraction(b, 53)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    assert (A / B).contains(a / b)


@settings(max_examples=60, deadline=None)
@given(fracs, st.fractions(min_value=-3, max_value=3, max_denominator=7))
def test_pow_rational_encloses_mpmath(a, e):
    with mpmath.workprec(300):
        exact = mpmath.mpf(a.numerator) / a.denominator
        value = exact ** (mpmath.mpf(e.numerator) / e.denominator)
        x = Interval.from_fraction(a, 64)
        y = x.pow_rational(e)
        assert _mp(y.lo) <= value <= _mp(y.hi)
