from fractions import Fraction
from math import comb, floor

import pytest

from fewnomials.bounds import (
    collinear_bound,
    kpt_bound,
    lrw_bound,
    mr_bound,
    new_bound,
    new_bound_value,
    table,
    thm2_bound,
)
from fewnomials.errors import DomainError

TABLE_1 = {
    3: (6, 33, 6, 5),
    4: (14, 62, 14, 11),
    5: (30, 108, 28, 22),
    6: (62, 174, 50, 40),
    10: (1022, 716, 258, 222),
}


def test_new_bound_values():
    assert new_bound(3) == 5
    assert new_bound(4) == 11
    assert new_bound(10) == 222


def test_other_columns():
    assert lrw_bound(10) == 1022
    assert kpt_bound(5) == 108
    assert mr_bound(6) == 50


def test_table_rows():
    rows = table(sorted(TABLE_1))
    assert {r.t: r.row() for r in rows} == TABLE_1


def test_new_bound_is_floor_of_exact_value():
    for t in range(3, 40):
        exact = Fraction(t**3, 3) - Fraction(3 * t * t, 2) + Fraction(25 * t, 6) - 3
        assert new_bound_value(t) == exact
        assert new_bound(t) == floor(exact)


def test_thm2_and_collinear_bounds():
    assert thm2_bound(0, 0) == 2
    assert thm2_bound(1, 1) == 4
    assert thm2_bound(comb(3, 2), comb(3, 2)) == 8
    assert collinear_bound(3) == 4
    assert collinear_bound(10) == 18
    assert collinear_bound(1) == 0


@pytest.mark.parametrize("fn", [new_bound, lrw_bound, kpt_bound, mr_bound])
def test_small_t_rejected(fn):
    with pytest.raises(DomainError):
        fn(2)
