from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fewnomials.errors import ZeroPolynomial
from fewnomials.exact import (
    Polynomial,
    count_with_multiplicity,
    isolate_roots,
    refine_root,
    sturm_count,
)

X = sympy.Symbol("x")


def P(*coeffs):
    return Polynomial(coeffs)


def to_sympy(p):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p.coeffs])), X)


def test_add_mul_derivative():
    assert P(-1, 0, 1) + P(1) == P(0, 0, 1)
    assert P(0, 0, 0, 1).derivative() == P(0, 0, 3)
    assert P(1, 1) * P(-1, 1) == P(-1, 0, 1)
    assert P(1, 2, 3).derivative().derivative() == P(6)


def test_zero_polynomial_has_no_coefficients():
    assert P(0, 0).is_zero()
    assert P(0, 0).coeffs == ()


def test_squarefree_part():
    # (x - 1)^2 x -> x^2 - x, checked against sympy's sqf_part
    p = Polynomial.from_roots([1, 1, 0])
    assert p.squarefree_part() == P(0, -1, 1)
    assert to_sympy(p.squarefree_part()) == sympy.Poly(sympy.sqf_part(to_sympy(p).as_expr()), X)


def test_gcd_is_monic_common_factor():
    a = Polynomial.from_roots([Fraction(1, 2), 3, 3])
    b = Polynomial.from_roots([3, -1])
    assert a.gcd(b) == P(-3, 1)


def test_divmod_roundtrip():
    a, b = P(1, 2, 3, 4, 5), P(Fraction(1, 3), 0, 2)
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_sturm_count_examples():
    assert sturm_count(P(Fraction(3, 16), -1, 1), 0, 1) == 2
    assert sturm_count(P(1, 0, 1), 0, 1) == 0
    cube = (P(-1, 2) ** 3).squarefree_part()
    assert sturm_count(cube, 0, 1) == 1


def test_sturm_count_excludes_endpoints():
    assert sturm_count(P(0, -1, 1), 0, 1) == 0


def test_sturm_count_zero_polynomial_raises():
    with pytest.raises(ZeroPolynomial):
        sturm_count(P(), 0, 1)


def test_isolate_roots_examples():
    boxes = isolate_roots(P(Fraction(3, 16), -1, 1), 0, 1)
    assert len(boxes) == 2
    assert boxes[0][0] <= Fraction(1, 4) <= boxes[0][1]
    assert boxes[1][0] <= Fraction(3, 4) <= boxes[1][1]
    assert isolate_roots(P(-2, 1), 0, 1) == []
    assert isolate_roots(P(0, -1, 1), 0, 1) == []


def test_refine_root_shrinks_box():
    p = P(-2, 0, 1)
    (box,) = isolate_roots(p, 0, 2)
    lo, hi = refine_root(p, box, Fraction(1, 10**12))
    assert hi - lo <= Fraction(1, 10**12)
    assert lo * lo <= 2 <= hi * hi


def test_count_with_multiplicity():
    p = Polynomial.from_roots([Fraction(1, 2)] * 3 + [Fraction(1, 3)])
    assert count_with_multiplicity(p, 0, 1) == 4


small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=1, max_size=6))
def test_sturm_matches_sympy(coeffs):
    p = Polynomial(coeffs)
    if p.degree < 1:
        return
    expected = len({r for r in sympy.Poly(to_sympy(p).as_expr(), X).real_roots() if 0 < r < 1})
    assert sturm_count(p, 0, 1) == expected


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=1, max_size=5), st.lists(small, min_size=1, max_size=5))
def test_ring_identities(a, b):
    p, q = Polynomial(a), Polynomial(b)
    assert p * q == q * p
    assert (p + q).derivative() == p.derivative() + q.derivative()
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()
