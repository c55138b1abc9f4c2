from fractions import Fraction

import pytest
import sympy
from oracles import resultant_positive_solutions

from fewnomials.errors import CollinearInput, DegenerateInput, InfiniteSolutionFamily, NoPositiveSolutions
from fewnomials.fewnomial import FewnomialFunction, count_roots_unit_interval
from fewnomials.harness import RunConfig, instance_seed, random_system
from fewnomials.reduction import (
    BivariateSparseSystem,
    count_collinear,
    count_positive_solutions,
    detect_collinear,
    monomial_change,
    normalize_trinomial,
    roundtrip_check,
)

G = [(-1, 0, 0), (1, 1, 0), (1, 0, 1)]


def system(f, g=G):
    return BivariateSparseSystem(f, g)


def test_system_invariants():
    with pytest.raises(DegenerateInput):
        system([(1, 1, 0)], [(-1, 0, 0), (1, 1, 0)])
    with pytest.raises(DegenerateInput):
        system([(1, 1, 0), (2, 1, 0)])
    with pytest.raises(DegenerateInput):
        system([(0, 1, 0)])


def test_json_roundtrip():
    s = system([(Fraction(3, 2), Fraction(1, 3), -2), (-1, 0, 1)])
    assert BivariateSparseSystem.from_json(s.to_json()) == s


def test_normalize_examples():
    assert normalize_trinomial(system([(1, 1, 0)])).g_terms == system([(1, 1, 0)]).g_terms
    half = Fraction(1, 2)
    g = normalize_trinomial(system([(1, 1, 0)], [(2, 0, 0), (-1, 1, 0), (-1, 0, 1)])).g_terms
    assert g == ((-1, 0, 0), (half, 1, 0), (half, 0, 1))
    with pytest.raises(NoPositiveSolutions):
        normalize_trinomial(system([(1, 1, 0)], [(1, 0, 0), (1, 1, 0), (1, 0, 1)]))


def test_normalize_moves_lone_sign_to_front():
    # 3u - 1 - v -> -1 + 3u^... after dividing by the lone positive term
    g = normalize_trinomial(system([(1, 0, 0)], [(3, 1, 0), (-1, 0, 0), (-1, 0, 1)])).g_terms
    assert g[0] == (-1, 0, 0)
    assert all(b > 0 for b, _, _ in g[1:])


def test_detect_collinear():
    assert detect_collinear([(-1, 0, 0), (1, 1, 0), (1, 2, 0)])
    assert not detect_collinear(G)
    assert detect_collinear([(-1, 0, 0), (1, 2, 4), (1, 3, 6)])


def test_monomial_change_examples():
    F = monomial_change(system([(1, 1, 0), (-1, 0, 1)])).F
    assert F == FewnomialFunction.from_pairs([(1, 1, 0), (-1, 0, 1)])
    assert count_roots_unit_interval(F).count == 1
    F = monomial_change(system([(1, 1, 1)], [(-1, 0, 0), (2, 1, 0), (3, 0, 1)])).F
    assert F == FewnomialFunction.from_pairs([(Fraction(1, 6), 1, 1)])
    assert count_roots_unit_interval(F).count == 0
    assert monomial_change(system([(1, 0, 0)])).F == FewnomialFunction.from_pairs([(1, 0, 0)])


def test_monomial_change_rejects_collinear():
    with pytest.raises(CollinearInput):
        monomial_change(system([(1, 0, 0), (-1, 1, 1)], [(-1, 0, 0), (1, 1, 0), (1, 2, 0)]))


def test_count_examples():
    result = count_positive_solutions(system([(1, 1, 0), (-1, 0, 1)]))
    assert (result.count, result.rigor, result.bound_holds) == (1, "certified", True)
    with pytest.raises(NoPositiveSolutions):
        count_positive_solutions(system([(1, 1, 0), (1, 0, 1)], [(1, 0, 0), (1, 1, 0), (1, 0, 1)]))


def test_witness_pulls_back_to_solution():
    s = system([(1, 1, 0), (-1, 0, 1)])
    rc = count_positive_solutions(s).root_count
    for box in rc.witnesses:
        assert roundtrip_check(s, box)


def test_collinear_branch_matches_sympy():
    # g depends on z = uv only: z^2 + z = 1; then u = 2v - 1 on uv = z0
    s = system([(1, 1, 0), (-2, 0, 1), (1, 0, 0)], [(-1, 0, 0), (1, 1, 1), (1, 2, 2)])
    result = count_positive_solutions(s)
    assert result.collinear and result.bound == 4
    v = sympy.Symbol("v")
    z0 = (sympy.sqrt(5) - 1) / 2
    expected = [r for r in sympy.solve((2 * v - 1) * v - z0, v) if r.is_positive and (2 * r - 1).is_positive]
    assert result.count == len(expected) == 1


def test_collinear_without_solutions():
    # f = 0 forces uv = 1, where g = 1
    s = system([(-1, 0, 0), (1, 1, 1)], [(-1, 0, 0), (1, 1, 1), (1, 2, 2)])
    assert count_positive_solutions(s).count == 0


def test_collinear_infinite_family():
    # f = 2g: every point of the curve g = 0 solves the system
    s = system([(-2, 0, 0), (2, 1, 1), (2, 2, 2)], [(-1, 0, 0), (1, 1, 1), (1, 2, 2)])
    with pytest.raises(InfiniteSolutionFamily):
        count_collinear(normalize_trinomial(s))


def test_random_systems_match_resultant_oracle():
    cfg = RunConfig(t=3, numerator_range=(0, 4), integer_exponents=True)
    for i in range(25):
        s = random_system(cfg, instance_seed(21, i))
        try:
            count = count_positive_solutions(s).count
        except NoPositiveSolutions:
            count = 0
        assert count == resultant_positive_solutions(s.f_terms, s.g_terms), s


def test_random_systems_are_valid_and_deterministic():
    cfg = RunConfig(t=4)
    for i in range(1000):
        seed = instance_seed(3, i)
        s = random_system(cfg, seed)
        assert s == random_system(cfg, seed)
        assert s.t == 4 and not detect_collinear(s.g_terms)
        signs = {b > 0 for b, _, _ in s.g_terms}
        assert signs == {True, False}
