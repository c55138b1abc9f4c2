"""Exact real coefficients built from rational powers of positive rationals.

A ``PowerProduct`` is ``sign * prod(base_i ** exponent_i)``.  Internally it is
kept in the canonical form ``r * prod(p ** f_p)`` with ``r`` rational, ``p``
prime and ``0 < f_p < 1``.  Distinct canonical radicals are linearly
independent over Q, so a ``PowerSum`` (a Q-linear combination of canonical
radicals) is zero exactly when all of its rational coefficients vanish.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import floor

from .exact import Polynomial, isolate_roots, refine_root, sturm_count
from .intervals import Interval

MAX_SIGN_PRECISION = 1 << 14


def _frac(value):
    return value if isinstance(value, Fraction) else Fraction(value)


@lru_cache(maxsize=4096)
def _factor(n):
    from sympy import factorint

    return tuple(sorted(factorint(n).items())) if n > 1 else ()


def _canonical(factors):
    """Split ``prod(base ** exp)`` into ``(rational, radical_key)``."""
    exps = {}
    for base, exp in factors:
        base, exp = _frac(base), _frac(exp)
        if base <= 0:
            raise ValueError("power-product bases must be positive")
        if exp == 0 or base == 1:
            continue
        for p, v in _factor(base.numerator):
            exps[p] = exps.get(p, Fraction(0)) + v * exp
        for p, v in _factor(base.denominator):
            exps[p] = exps.get(p, Fraction(0)) - v * exp
    rational = Fraction(1)
    key = []
    for p in sorted(exps):
        e = exps[p]
        whole = floor(e)
        rest = e - whole
        if whole:
            rational *= Fraction(p) ** whole
        if rest:
            key.append((p, rest))
    return rational, tuple(key)


def _key_product(k1, k2):
    exps = dict(k1)
    for p, e in k2:
        exps[p] = exps.get(p, Fraction(0)) + e
    rational = Fraction(1)
    key = []
    for p in sorted(exps):
        e = exps[p]
        if e >= 1:
            rational *= p
            e -= 1
        if e:
            key.append((p, e))
    return rational, tuple(key)


@lru_cache(maxsize=65536)
def _radical_enclosure(key, prec):
    value = Interval.from_fraction(1, prec)
    for p, e in key:
        value = value * Interval.from_fraction(p, prec).pow_rational(e)
    return value


def _radical_float(key):
    out = 1.0
    for p, e in key:
        out *= float(p) ** float(e)
    return out


class PowerSum:
    """Finite Q-linear combination of canonical radicals (a ring element)."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for key, c in (terms or {}).items():
            c = _frac(c)
            if c:
                clean[key] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def rational(cls, value):
        return cls({(): _frac(value)})

    @classmethod
    def power_product(cls, factors, sign=1):
        rational, key = _canonical(factors)
        return cls({key: rational * sign})

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        raise TypeError(f"cannot use {type(value).__name__} as a coefficient")

    # -- predicates ---------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_rational(self):
        return all(not key for key in self.terms)

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("irrational value")
        return self.terms.get((), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PowerSum.rational(other)
        if not isinstance(other, PowerSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce_like(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return PowerSum(out)

    __radd__ = __add__

    def __neg__(self):
        return PowerSum({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce_like(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return PowerSum.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PowerSum()
            return PowerSum({k: c * other for k, c in self.terms.items()})
        if not isinstance(other, PowerSum):
            return NotImplemented
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                r, key = _key_product(k1, k2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2 * r
        return PowerSum(out)

    __rmul__ = __mul__

    # -- numerics -----------------------------------------------------
    def enclose(self, prec=64):
        total = Interval.from_fraction(0, prec)
        for key, c in self.terms.items():
            term = Interval.from_fraction(c, prec)
            if key:
                term = term * _radical_enclosure(key, prec)
            total = total + term
        return total

    def sign(self):
        if not self.terms:
            return 0
        if self.is_rational():
            c = self.as_fraction()
            return (c > 0) - (c < 0)
        prec = 64
        while prec <= MAX_SIGN_PRECISION:
            s = self.enclose(prec).sign()
            if s:
                return s
            prec *= 2
        raise ArithmeticError("sign of a nonzero radical sum not resolved")

    def __float__(self):
        return sum(float(c) * _radical_float(k) for k, c in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "PowerSum(0)"
        parts = []
        for key, c in sorted(self.terms.items()):
            rad = "*".join(f"{p}^({e})" for p, e in key)
            parts.append(f"{c}" + (f"*{rad}" if rad else ""))
        return "PowerSum(" + " + ".join(parts) + ")"

    def to_json(self):
        return [
            {"c": str(c), "radical": [[p, str(e)] for p, e in key]}
            for key, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, data):
        if isinstance(data, (str, int)):
            return cls.rational(Fraction(data))
        terms = {}
        for item in data:
            rational, key = _canonical((p, Fraction(e)) for p, e in item.get("radical", []))
            terms[key] = terms.get(key, Fraction(0)) + Fraction(item["c"]) * rational
        return cls(terms)


def _coerce_like(other):
    if isinstance(other, PowerSum):
        return other
    if isinstance(other, (int, Fraction)):
        return PowerSum.rational(other)
    return NotImplemented


class PowerProduct:
    """``sign * prod(base ** exponent)`` with positive rational bases."""

    __slots__ = ("factors", "sign", "rational", "key")

    def __init__(self, factors, sign=1):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.factors = tuple((_frac(b), _frac(e)) for b, e in factors)
        self.sign = sign
        self.rational, self.key = _canonical(self.factors)

    def as_power_sum(self):
        return PowerSum({self.key: self.rational * self.sign})

    def enclose(self, prec=64):
        return self.as_power_sum().enclose(prec)

    def __float__(self):
        return float(self.as_power_sum())

    def __repr__(self):
        body = " * ".join(f"({b})^({e})" for b, e in self.factors) or "1"
        return f"PowerProduct({'-' if self.sign < 0 else ''}{body})"


def as_coefficient(value):
    """Coerce ints, Fractions and PowerProducts into a ring element."""
    if isinstance(value, PowerProduct):
        return value.as_power_sum()
    if isinstance(value, (int, Fraction)):
        return PowerSum.rational(value)
    if isinstance(value, str):
        return PowerSum.rational(Fraction(value))
    return value


# ---------------------------------------------------------------------------
# Elements of Q[zeta] for a real algebraic zeta given by an isolating interval


class RealAlgebraic:
    """A real root of a squarefree rational polynomial, by isolating interval."""

    def __init__(self, poly, interval):
        self.poly = poly.squarefree_part()
        self.interval = interval
        a, b = interval
        if a != b and (self.poly(a) == 0 or self.poly(b) == 0):
            raise ValueError("isolating interval endpoints must not be roots")

    @classmethod
    def roots_in(cls, poly, lo, hi):
        sqf = poly.squarefree_part()
        return [cls(sqf, iv) for iv in isolate_roots(sqf, lo, hi)]

    @property
    def is_rational(self):
        return self.interval[0] == self.interval[1]

    def refine(self, width):
        self.interval = refine_root(self.poly, self.interval, width)
        return self.interval

    def enclose(self, prec=64):
        a, b = self.refine(Fraction(1, 2 ** (prec + 4)))
        return Interval.from_fractions(a, b, prec)

    def is_root_of(self, q):
        """Exact test whether this number is a root of ``q``."""
        if q.is_zero():
            return True
        a, b = self.interval
        if a == b:
            return q(a) == 0
        g = self.poly.gcd(q)
        if g.degree < 1:
            return False
        return sturm_count(g, a, b) > 0

    def __float__(self):
        a, b = self.refine(Fraction(1, 2**60))
        return float((a + b) / 2)

    def __repr__(self):
        return f"RealAlgebraic({self.poly}, ~{float(self):.12g})"


class AlgebraicElement:
    """``value(zeta)`` for a rational polynomial ``value`` and algebraic ``zeta``."""

    __slots__ = ("value", "root")

    def __init__(self, value, root):
        self.value = value % root.poly if value.degree >= root.poly.degree else value
        self.root = root

    def _wrap(self, poly):
        return AlgebraicElement(poly, self.root)

    def is_zero(self):
        return self.value.is_zero() or self.root.is_root_of(self.value)

    def is_rational(self):
        return self.value.degree <= 0

    def __add__(self, other):
        if isinstance(other, AlgebraicElement):
            return self._wrap(self.value + other.value)
        return self._wrap(self.value + Polynomial.constant(other))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.value)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraicElement):
            return self._wrap(self.value * other.value)
        return self._wrap(self.value.scale(other))

    __rmul__ = __mul__

    def enclose(self, prec=64):
        if self.value.degree <= 0:
            return Interval.from_fraction(self.value.coeffs[0] if self.value.coeffs else 0, prec)
        width = Fraction(1, 2 ** (prec + 8))
        while True:
            a, b = self.root.refine(width)
            if a == b:
                return Interval.from_fraction(self.value(a), prec)
            box = Interval.from_fractions(a, b, prec + 16)
            out = self.value.eval_interval(box)
            out = Interval(out.lo, out.hi, prec)
            if out.sign() or width < Fraction(1, 2 ** (4 * prec)):
                return out
            width /= 2**16

    def sign(self):
        if self.is_zero():
            return 0
        prec = 64
        while True:
            s = self.enclose(prec).sign()
            if s:
                return s
            prec *= 2

    def __float__(self):
        return float(self.enclose(80))

    def __repr__(self):
        return f"AlgebraicElement({self.value} at {self.root!r})"

    def to_json(self):
        return {"poly": [str(c) for c in self.value.coeffs], "approx": float(self)}
