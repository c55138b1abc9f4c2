from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import grid_sign_changes, sympy_root_count

from fewnomials.errors import DomainError
from fewnomials.exact import Polynomial
from fewnomials.fewnomial import (
    FewnomialFunction,
    count_roots_unit_interval,
    derivative_factorized,
    eval_interval,
    multiplicity_profile,
)
from fewnomials.intervals import Interval

half, third = Fraction(1, 2), Fraction(1, 3)


def F(*triples):
    return FewnomialFunction.from_pairs(triples)


def encloses(box, value):
    num, den = box.lo.as_integer_ratio()
    lo = mpmath.mpf(int(num)) / int(den)
    num, den = box.hi.as_integer_ratio()
    hi = mpmath.mpf(int(num)) / int(den)
    return lo <= value <= hi


def test_eval_interval_examples():
    assert eval_interval(F((1, 1, 0), (-half, 0, 0)), Fraction(1, 4)).contains(Fraction(-1, 4))
    with mpmath.workprec(200):
        box = eval_interval(F((1, half, half)), Interval.from_fraction(Fraction(1, 4)))
        assert encloses(box, mpmath.sqrt(3) / 4)
        box = eval_interval(F((1, third, 0), (1, 0, third)), half, 100)
        assert encloses(box, 2 * mpmath.cbrt(mpmath.mpf(1) / 2))


def test_eval_interval_outside_unit_interval():
    with pytest.raises(DomainError):
        eval_interval(F((1, 1, 0)), (Fraction(0), half))


def test_derivative_examples():
    assert derivative_factorized(F((1, 2, 0))) == F((2, 1, 0))
    assert derivative_factorized(F((1, 1, 1))) == F((1, 0, 1), (-1, 1, 0))
    assert derivative_factorized(F((1, half, 0))) == F((half, -half, 0))


def test_like_terms_merge():
    assert F((1, 1, 0), (2, 1, 0)).t == 1
    assert F((1, 1, 0), (-1, 1, 0)).is_zero()


def test_count_examples():
    assert count_roots_unit_interval(F((2, 1, 0), (-1, 0, 0))).count == 1
    # grid oracle: x(1-x) peaks at 1/4 and (1/4)^(1/3) > 1/2
    G = F((1, third, third), (-half, 0, 0))
    rc = count_roots_unit_interval(G)
    assert (rc.count, rc.rigor) == (2, "certified")
    assert grid_sign_changes(lambda s: mpmath.cbrt(s * (1 - s)) - 0.5, n=20_000) == 2
    assert count_roots_unit_interval(F((1, 2, 1), (-Fraction(1, 8), 0, 0))).count == 2


def test_count_methods_agree_on_polynomial():
    G = FewnomialFunction.from_polynomial(Polynomial.from_roots([Fraction(1, 5), Fraction(2, 3), 2]))
    for method in ("interval", "exact", "auto"):
        assert count_roots_unit_interval(G, method=method).count == 2


def test_root_at_boundary_not_counted():
    assert count_roots_unit_interval(F((1, 1, 0))).count == 0


def test_witnesses_are_disjoint():
    G = FewnomialFunction.from_polynomial(Polynomial.from_roots([Fraction(1, 7), Fraction(1, 2), Fraction(5, 6)]))
    rc = count_roots_unit_interval(G, method="interval")
    assert rc.count == 3
    boxes = sorted(rc.witnesses)
    assert all(a[1] <= b[0] for a, b in zip(boxes, boxes[1:]))


def test_multiplicity_profile():
    simple = F((2, 1, 0), (-1, 0, 0))
    assert multiplicity_profile(simple, (Fraction(2, 5), Fraction(3, 5))).multiplicity == 1
    square = FewnomialFunction.from_polynomial(Polynomial((1, -4, 4)))
    est = multiplicity_profile(square, (Fraction(2, 5), Fraction(3, 5)))
    assert (est.multiplicity, est.rigor) == (2, "heuristic")
    quarter = F((1, 1, 0), (-Fraction(1, 4), 0, 0))
    assert multiplicity_profile(quarter, (Fraction(1, 5), third)).multiplicity == 1


def test_json_roundtrip():
    G = F((3, half, Fraction(-2, 3)), (-1, 2, 0))
    assert FewnomialFunction.from_json(G.to_json()) == G


roots = st.lists(st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=20), max_size=4)


@settings(max_examples=40, deadline=None)
@given(roots, st.integers(0, 2), st.integers(0, 2))
def test_interval_count_matches_sympy(rs, a, b):
    poly = Polynomial.from_roots(sorted(set(rs))) * Polynomial((3, 1))
    G = FewnomialFunction.from_polynomial(poly, a, b)
    rc = count_roots_unit_interval(G, method="interval")
    assert rc.count == sympy_root_count(poly.coeffs)
