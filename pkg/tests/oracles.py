"""Independent reference computations shared by the tests.

Nothing here calls into the package's arithmetic.  The Wronskian oracles
are a sympy determinant and a plain Leibniz expansion over monomials; the
root oracles are sympy real-root isolation and a dense mpmath sign scan.
"""

from fractions import Fraction
from itertools import permutations
from math import comb

import mpmath
import sympy

x, y = sympy.symbols("x y", positive=True)


def rat(q):
    q = Fraction(q)
    return sympy.Rational(q.numerator, q.denominator)


def sympy_wronskian_factor(triples):
    """``(X, Y, poly)`` with ``W(f_1..f_j) = x^X (1-x)^Y poly(x)`` for terms
    ``c x^k (1-x)^l`` given as rational triples ``(c, k, l)``.

    ``1 - x`` is kept as a separate symbol ``y`` so rational powers combine
    exactly; ``d/dx`` acts as ``d/dx - d/dy``.
    """
    j = len(triples)
    rows = []
    for c, k, l in triples:
        f = rat(c) * x ** rat(k) * y ** rat(l)
        row = [f]
        for _ in range(j - 1):
            f = sympy.expand(sympy.diff(f, x) - sympy.diff(f, y))
            row.append(f)
        rows.append(row)
    det = sympy.expand(sympy.Matrix(rows).det(method="berkowitz"))
    shift = sympy.Rational(j * (j - 1), 2)
    X = sum((rat(k) for _, k, _ in triples), sympy.Integer(0)) - shift
    Y = sum((rat(l) for _, _, l in triples), sympy.Integer(0)) - shift
    reduced = sympy.expand(det * x ** (-X) * y ** (-Y))
    poly = sympy.Poly(sympy.expand(reduced.subs(y, 1 - x)), x)
    return Fraction(str(X)), Fraction(str(Y)), [Fraction(str(c)) for c in reversed(poly.all_coeffs())]


def _d(expr):
    """``d/dx`` of ``sum c x^a y^b`` with ``y = 1 - x``."""
    out = {}
    for (a, b), c in expr.items():
        for key, v in (((a - 1, b), c * a), ((a, b - 1), -c * b)):
            if v:
                out[key] = out.get(key, 0) + v
    return {k: v for k, v in out.items() if v}


def _mul(p, q):
    out = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            key = (a1 + a2, b1 + b2)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _parity(perm):
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        sign *= -1 if length % 2 == 0 else 1
    return sign


def leibniz_wronskian_factor(triples):
    """Same contract as ``sympy_wronskian_factor`` by a plain Leibniz
    expansion over monomials ``x^a y^b`` with exact rational exponents."""
    j = len(triples)
    rows = []
    for c, k, l in triples:
        f = {(Fraction(k), Fraction(l)): Fraction(c)}
        row = [f]
        for _ in range(j - 1):
            f = _d(f)
            row.append(f)
        rows.append(row)
    det = {}
    for perm in permutations(range(j)):
        term = {(Fraction(0), Fraction(0)): Fraction(_parity(perm))}
        for i in range(j):
            term = _mul(term, rows[i][perm[i]])
        for key, v in term.items():
            det[key] = det.get(key, 0) + v
    shift = Fraction(j * (j - 1), 2)
    X = sum((Fraction(k) for _, k, _ in triples), Fraction(0)) - shift
    Y = sum((Fraction(l) for _, _, l in triples), Fraction(0)) - shift
    poly = {}
    for (a, b), c in det.items():
        if not c:
            continue
        a, b = a - X, b - Y
        if a.denominator != 1 or b.denominator != 1 or a < 0 or b < 0:
            raise AssertionError(f"monomial x^{a} y^{b} outside the closed form")
        a, b = int(a), int(b)
        for i in range(b + 1):
            poly[a + i] = poly.get(a + i, 0) + c * comb(b, i) * (-1) ** i
    n = max((d for d, v in poly.items() if v), default=-1)
    return X, Y, [Fraction(poly.get(d, 0)) for d in range(n + 1)]


def sympy_root_count(coeffs, lo=0, hi=1):
    """Distinct real roots in the open interval of ``sum coeffs[i] x^i``."""
    p = sympy.Poly(list(reversed([rat(c) for c in coeffs])), x)
    if p.degree() < 1:
        return 0
    return len({r for r in p.real_roots() if rat(lo) < r < rat(hi)})


def grid_sign_changes(fn, n=100_000, prec=80):
    """Sign changes of ``fn`` (mpmath callable) on a uniform grid in (0, 1)."""
    with mpmath.workprec(prec):
        changes, prev = 0, None
        for i in range(1, n):
            v = fn(mpmath.mpf(i) / n)
            s = (v > 0) - (v < 0)
            if s and prev is not None and s != prev:
                changes += 1
            if s:
                prev = s
        return changes


def resultant_positive_solutions(f_terms, g_terms, digits=60):
    """Positive solutions of ``f = g = 0`` for integer exponents, from the
    resultant in ``v`` and a high-precision check of each candidate ``v``.

    Both sides are first divided by their monomial content, which leaves
    the positive solutions unchanged and keeps the resultant nonzero.
    """
    u, v = sympy.symbols("u v")

    def side(terms):
        a0 = min(a for _, a, _ in terms)
        b0 = min(b for _, _, b in terms)
        return sum(rat(c) * u ** int(a - a0) * v ** int(b - b0) for c, a, b in terms)

    f, g = side(f_terms), side(g_terms)
    res = sympy.Poly(sympy.resultant(f, g, v), u)
    if res.is_zero:
        raise ValueError("f and g share a factor: infinitely many solutions")
    f_num = sympy.lambdify((u, v), f, "mpmath")
    g_coeffs = [sympy.lambdify(u, c, "mpmath") for c in sympy.Poly(g, v).all_coeffs()]
    sqf = res.sqf_part()
    expected = sqf.count_roots(0, None) - (1 if sqf.eval(0) == 0 else 0)
    found = 0
    with mpmath.workdps(digits):
        tiny = mpmath.mpf(10) ** (-(digits // 3))
        coeffs = [mpmath.mpf(c.p) / c.q for c in (sympy.Rational(c) for c in sqf.all_coeffs())]
        roots = mpmath.polyroots(coeffs, maxsteps=2000, extraprec=8 * digits)
        positive = [mpmath.re(r) for r in roots if abs(mpmath.im(r)) < tiny and mpmath.re(r) > tiny]
        if len(positive) != expected:
            raise ArithmeticError("numerical roots of the resultant disagree with the exact count")
        for u0 in positive:
            coeffs = [mpmath.mpf(c(u0)) for c in g_coeffs]
            while coeffs and abs(coeffs[0]) < tiny:
                coeffs.pop(0)
            for v0 in mpmath.polyroots(coeffs, maxsteps=500, extraprec=4 * digits):
                if abs(mpmath.im(v0)) > tiny or mpmath.re(v0) <= 0:
                    continue
                if abs(f_num(u0, mpmath.re(v0))) < tiny:
                    found += 1
    return found
