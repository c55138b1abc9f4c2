"""Factorized Wronskians of fewnomial terms and the audit of the recursion
``R_j <= R_{j+1} + W_j + W_{j-1} + 1`` on their root counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb

from .errors import InconclusiveBox, ZeroFunction
from .exact import Polynomial
from .fewnomial import FewnomialFunction, FewnomialTerm, count_roots_unit_interval
from .intervals import Interval, one_minus
from .radicals import PowerSum

_X = Polynomial.x()
_ONE_MINUS_X = Polynomial((1, -1))
_X_ONE_MINUS_X = Polynomial((0, 1, -1))


def term_derivative_poly(k, l, m):
    """``p_m`` with ``(x^k (1-x)^l)^(m) = x^(k-m) (1-x)^(l-m) p_m(x)``."""
    k, l = Fraction(k), Fraction(l)
    p = Polynomial.constant(1)
    for i in range(m):
        p = (
            _ONE_MINUS_X * p * (k - i)
            - _X * p * (l - i)
            + _X_ONE_MINUS_X * p.derivative()
        )
    return p


def bareiss_determinant(matrix):
    """Fraction-free determinant of a square matrix of polynomials."""
    n = len(matrix)
    if n == 0:
        return Polynomial.constant(1)
    a = [list(row) for row in matrix]
    sign = 1
    prev = Polynomial.constant(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return Polynomial()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


@dataclass(frozen=True)
class FactorizedWronskian:
    """``scalar * x**x_exp * (1-x)**one_minus_x_exp * poly(x)``.

    ``scalar`` is the product of the term coefficients (possibly irrational)
    and ``poly`` the rational determinant ``det[p_{tau_i, m}]``.
    """

    x_exp: Fraction
    one_minus_x_exp: Fraction
    poly: Polynomial
    scalar: object
    order: int

    @property
    def coefficients(self):
        """Coefficients of the full polynomial factor ``scalar * poly``."""
        return [self.scalar * c for c in self.poly.coeffs]

    def is_zero(self):
        return self.poly.is_zero() or self.scalar.is_zero()

    def as_fewnomial(self):
        return FewnomialFunction(
            FewnomialTerm(self.scalar * c, self.x_exp + n, self.one_minus_x_exp)
            for n, c in enumerate(self.poly.coeffs)
            if c
        )

    def eval_interval(self, x, prec=128):
        X = Interval.from_fraction(x, prec)
        value = self.scalar.enclose(prec) * self.poly.eval_interval(X)
        value = value * X.pow_rational(self.x_exp) if self.x_exp >= 0 else value / X.pow_rational(-self.x_exp)
        Y = one_minus(X)
        e = self.one_minus_x_exp
        return value * Y.pow_rational(e) if e >= 0 else value / Y.pow_rational(-e)


def _as_term(term):
    return term if isinstance(term, FewnomialTerm) else FewnomialTerm(*term)


def wronskian_factorized(terms):
    """Wronskian of ``c_i x^{k_i} (1-x)^{l_i}`` in factorized form."""
    terms = [_as_term(t) for t in terms]
    j = len(terms)
    if j == 0:
        raise ValueError("need at least one term")
    if len({t.exponents for t in terms}) != j:
        raise ValueError("exponent pairs must be distinct")
    shift = Fraction(j * (j - 1), 2)
    matrix = [[term_derivative_poly(t.x_exp, t.one_minus_x_exp, m) for m in range(j)] for t in terms]
    scalar = PowerSum.rational(1)
    for t in terms:
        scalar = scalar * t.coefficient
    return FactorizedWronskian(
        x_exp=sum((t.x_exp for t in terms), Fraction(0)) - shift,
        one_minus_x_exp=sum((t.one_minus_x_exp for t in terms), Fraction(0)) - shift,
        poly=bareiss_determinant(matrix),
        scalar=scalar,
        order=j,
    )


def direct_wronskian_enclosure(terms, x, prec=256):
    """Enclosure of ``det[f_i^(m)(x)]`` from termwise derivatives and a
    Leibniz expansion; independent of the ``p_m`` recurrence."""
    terms = [_as_term(t) for t in terms]
    j = len(terms)
    rows = []
    for t in terms:
        f = FewnomialFunction([t])
        row = []
        for _ in range(j):
            row.append(_enclose_at(f, x, prec))
            f = f.derivative()
        rows.append(row)
    total = Interval.from_fraction(0, prec)
    for perm in permutations(range(j)):
        prod = Interval.from_fraction(_perm_sign(perm), prec)
        for i, m in enumerate(perm):
            prod = prod * rows[i][m]
        total = total + prod
    return total


def _enclose_at(f, x, prec):
    if f.is_zero():
        return Interval.from_fraction(0, prec)
    X = Interval.from_fraction(x, prec)
    Y = one_minus(X)
    total = Interval.from_fraction(0, prec)
    for t in f.terms:
        v = t.coefficient.enclose(prec)
        v = v * X.pow_rational(t.x_exp) if t.x_exp >= 0 else v / X.pow_rational(-t.x_exp)
        e = t.one_minus_x_exp
        v = v * Y.pow_rational(e) if e >= 0 else v / Y.pow_rational(-e)
        total = total + v
    return total


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# the sequence R_j and the recursion audit


@dataclass
class RSequenceEntry:
    j: int
    summands: list
    root_count: object
    wronskian_root_count: object

    @property
    def r_function(self):
        total = FewnomialFunction([])
        for w in self.summands:
            total = total + w.as_fewnomial()
        return total


def _count(fn, method, precision):
    if fn.is_zero():
        raise ZeroFunction("Wronskian vanishes identically")
    return count_roots_unit_interval(fn, method=method, precision=precision)


def r_sequence(F, method="auto", precision=64):
    """Entries ``j = 1..t`` holding ``W(f_1..f_{j-1}, f_i)`` for ``i >= j``
    and the root counts of their sum ``R_j`` and of ``W_j``."""
    terms = list(F.terms)
    t = len(terms)
    if t < 2:
        raise ValueError("need at least two terms")
    out = []
    for j in range(1, t + 1):
        head = terms[: j - 1]
        summands = [wronskian_factorized(head + [terms[i]]) for i in range(j - 1, t)]
        entry = RSequenceEntry(j, summands, None, None)
        entry.root_count = _count(entry.r_function, method, precision)
        entry.wronskian_root_count = _count(summands[0].as_fewnomial(), method, precision)
        out.append(entry)
    return out


@dataclass
class AuditRow:
    j: int
    r_j: int | None
    r_next: int | None
    w_j: int | None
    w_prev: int | None
    holds: bool | None
    verified: bool

    def to_json(self):
        return dict(self.__dict__)


def _with_multiplicity(rc):
    if rc is None or not rc.certified:
        return None
    return rc.multiplicity_total


def audit_recursion(F, method="auto", precision=64):
    """Rows ``j = 1..t-1`` of ``R_j <= R_{j+1} + W_j + W_{j-1} + 1``.

    Counts are taken with multiplicity.  A row built from an uncertified
    count is marked unverified and carries ``holds = None``.
    """
    try:
        seq = r_sequence(F, method=method, precision=precision)
    except InconclusiveBox:
        return [AuditRow(j, None, None, None, None, None, False) for j in range(1, F.t)]
    rows = []
    for idx in range(len(seq) - 1):
        j = idx + 1
        r_j = _with_multiplicity(seq[idx].root_count)
        r_next = _with_multiplicity(seq[idx + 1].root_count)
        w_j = _with_multiplicity(seq[idx].wronskian_root_count)
        w_prev = 0 if j == 1 else _with_multiplicity(seq[idx - 1].wronskian_root_count)
        values = (r_j, r_next, w_j, w_prev)
        if any(v is None for v in values):
            rows.append(AuditRow(j, *values, None, False))
        else:
            rows.append(AuditRow(j, *values, r_j <= r_next + w_j + w_prev + 1, True))
    return rows


@dataclass
class PenultimateForm:
    """``R_{t-1} = x^g1 (1-x)^d1 P1 + x^g2 (1-x)^d2 P2`` with scalars folded in."""

    gamma1: Fraction
    delta1: Fraction
    P1: FactorizedWronskian
    gamma2: Fraction
    delta2: Fraction
    P2: FactorizedWronskian

    @property
    def degree_bound(self):
        t = self.P1.order + 1
        return comb(t - 1, 2)

    def theorem2_bound(self):
        return self.P1.poly.degree + self.P2.poly.degree + 2

    def as_fewnomial(self):
        return self.P1.as_fewnomial() + self.P2.as_fewnomial()


def r_penultimate_form(F):
    terms = list(F.terms)
    t = len(terms)
    if t < 3:
        raise ValueError("need at least three terms")
    head = terms[: t - 2]
    w1 = wronskian_factorized(head + [terms[t - 2]])
    w2 = wronskian_factorized(head + [terms[t - 1]])
    return PenultimateForm(w1.x_exp, w1.one_minus_x_exp, w1, w2.x_exp, w2.one_minus_x_exp, w2)
