"""Dense univariate polynomials over the rationals, with Sturm-based real
root counting and isolation."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import comb, lcm

from .errors import ZeroPolynomial
from .intervals import Interval


def _frac(value):
    return value if isinstance(value, Fraction) else Fraction(value)


class Polynomial:
    """Immutable polynomial; ``coeffs[i]`` is the coefficient of ``x**i``.

    The zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def monomial(cls, degree, c=1):
        return cls([0] * degree + [c])

    @classmethod
    def one_minus_x_power(cls, n):
        """Expansion of ``(1 - x)**n`` for integer ``n >= 0``."""
        return cls([(-1) ** i * comb(n, i) for i in range(n + 1)])

    @classmethod
    def from_roots(cls, roots):
        p = cls.constant(1)
        for r in roots:
            p = p * cls((-_frac(r), 1))
        return p

    # -- basic protocol -----------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            parts.append(f"({c}){mono}" if mono else f"({c})")
        return "Polynomial(" + " + ".join(parts) + ")"

    def __iter__(self):
        return iter(self.coeffs)

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        c = _frac(c)
        return Polynomial([a * c for a in self.coeffs])

    def shift(self, k):
        """Multiply by ``x**k`` (k >= 0)."""
        if not self.coeffs:
            return self
        return Polynomial([0] * k + list(self.coeffs))

    def derivative(self):
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        dlen = len(other.coeffs)
        for k in range(dq, -1, -1):
            c = rem[k + dlen - 1] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[: dlen - 1])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def monic(self):
        if not self.coeffs:
            return self
        return self.scale(1 / self.coeffs[-1])

    def primitive(self):
        """Positive rational multiple with coprime integer coefficients."""
        if not self.coeffs:
            return self
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(_gcd, ints, 0)
        return Polynomial([Fraction(c, g) for c in ints])

    def gcd(self, other):
        """Monic greatest common divisor (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
            if not b.is_zero():
                b = b.primitive()
        return a.monic()

    def squarefree_part(self):
        if self.degree <= 0:
            return self.monic() if self.coeffs else self
        g = self.gcd(self.derivative())
        return self.exact_div(g).monic()

    def squarefree_decomposition(self):
        """Yun's algorithm: list of ``(factor, multiplicity)`` with monic,
        pairwise coprime, squarefree factors of positive degree."""
        if self.degree <= 0:
            return []
        f = self.monic()
        df = f.derivative()
        a = f.gcd(df)
        b = f.exact_div(a)
        c = df.exact_div(a)
        d = c - b.derivative()
        out = []
        i = 1
        while b.degree > 0:
            a = b.gcd(d)
            b = b.exact_div(a)
            c = d.exact_div(a)
            if a.degree > 0:
                out.append((a, i))
            d = c - b.derivative()
            i += 1
        return out

    def compose_linear(self, a, b):
        """Return ``p(a*x + b)``."""
        a, b = _frac(a), _frac(b)
        out = Polynomial()
        lin = Polynomial((b, a))
        for c in reversed(self.coeffs):
            out = out * lin + Polynomial.constant(c)
        return out

    def reversed(self, degree=None):
        """``x**degree * p(1/x)`` (degree defaults to ``self.degree``)."""
        n = self.degree if degree is None else degree
        cs = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return Polynomial(cs[::-1])

    # -- evaluation ---------------------------------------------------
    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_interval(self, x):
        """Horner enclosure of ``p`` over the interval ``x``."""
        acc = Interval.from_fraction(0, x.prec)
        for c in reversed(self.coeffs):
            acc = acc * x + Interval.from_fraction(c, x.prec)
        return acc

    def eval_complex(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def sign_at(self, x):
        v = self(x)
        return (v > 0) - (v < 0)

    def root_bound(self):
        """Cauchy bound: every complex root has modulus < this value."""
        if self.degree < 1:
            return Fraction(1)
        lead = abs(self.coeffs[-1])
        return 1 + max(abs(c) / lead for c in self.coeffs[:-1])


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


# ---------------------------------------------------------------------------
# Sturm sequences


def sturm_sequence(p):
    p = p.squarefree_part()
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        # positive rescaling keeps the sign pattern
        r = r.scale(1 / abs(r.leading))
        seq.append(-r)
    return [s for s in seq if not s.is_zero()]


def _variations(seq, x):
    signs = []
    for s in seq:
        v = s.sign_at(x)
        if v:
            signs.append(v)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _check(p, lo, hi):
    if p.is_zero():
        raise ZeroPolynomial("Sturm count of the zero polynomial")
    if not lo < hi:
        raise ValueError("need lo < hi")


def sturm_count(p, lo, hi, seq=None):
    """Number of distinct real roots of ``p`` in the open interval ``(lo, hi)``."""
    lo, hi = _frac(lo), _frac(hi)
    _check(p, lo, hi)
    if p.degree == 0:
        return 0
    if seq is None:
        seq = sturm_sequence(p)
    n = _variations(seq, lo) - _variations(seq, hi)
    if seq[0](hi) == 0:
        n -= 1
    return n


def isolate_roots(p, lo, hi, seq=None):
    """Disjoint rational intervals, one per distinct root of ``p`` in ``(lo, hi)``.

    Each returned pair ``(a, b)`` either has ``a == b`` (an exact rational root)
    or satisfies ``p(a) != 0 != p(b)`` with exactly one root in ``(a, b)``.
    """
    lo, hi = _frac(lo), _frac(hi)
    _check(p, lo, hi)
    if p.degree == 0:
        return []
    if seq is None:
        seq = sturm_sequence(p)
    sqf = seq[0]
    out = []
    stack = [(lo, hi, sturm_count(sqf, lo, hi, seq))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1 and sqf(a) != 0 and sqf(b) != 0:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if sqf(m) == 0:
            out.append((m, m))
            left = sturm_count(sqf, a, m, seq)
            stack.append((a, m, left))
            stack.append((m, b, n - 1 - left))
        else:
            left = sturm_count(sqf, a, m, seq)
            stack.append((a, m, left))
            stack.append((m, b, n - left))
    out.sort()
    return out


def refine_root(p, interval, width):
    """Bisect an isolating interval of a squarefree ``p`` below ``width``."""
    a, b = interval
    if a == b:
        return a, b
    sa = p.sign_at(a)
    while b - a > width:
        m = (a + b) / 2
        sm = p.sign_at(m)
        if sm == 0:
            return m, m
        if sm == sa:
            a = m
        else:
            b = m
    return a, b


def count_with_multiplicity(p, lo, hi):
    """Roots of ``p`` in ``(lo, hi)`` counted with multiplicity."""
    _check(p, _frac(lo), _frac(hi))
    return sum(
        mult * sturm_count(factor, lo, hi)
        for factor, mult in p.squarefree_decomposition()
    )
