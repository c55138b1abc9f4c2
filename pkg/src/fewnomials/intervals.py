"""Outward-rounded real intervals on top of MPFR (via gmpy2).

Every endpoint is produced by an MPFR operation in round-down or round-up
mode, so each ``Interval`` encloses the exact real result of the
operations that built it.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr, mpz

DEFAULT_PRECISION = 64


@lru_cache(maxsize=None)
def _contexts(prec):
    down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    return down, up


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, type(mpfr(0))):
        num, den = value.as_integer_ratio()
        return Fraction(int(num), int(den))
    return Fraction(value)


class Interval:
    """Closed interval ``[lo, hi]`` with MPFR endpoints at a fixed precision."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi=None, prec=DEFAULT_PRECISION):
        if hi is None:
            hi = lo
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # -- construction -------------------------------------------------
    @classmethod
    def from_fraction(cls, value, prec=DEFAULT_PRECISION):
        value = _as_fraction(value)
        down, up = _contexts(prec)
        num, den = mpz(value.numerator), mpz(value.denominator)
        return cls(down.div(num, den), up.div(num, den), prec)

    @classmethod
    def from_fractions(cls, lo, hi, prec=DEFAULT_PRECISION):
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        down, up = _contexts(prec)
        return cls(
            down.div(mpz(lo.numerator), mpz(lo.denominator)),
            up.div(mpz(hi.numerator), mpz(hi.denominator)),
            prec,
        )

    @classmethod
    def coerce(cls, value, prec):
        if isinstance(value, Interval):
            return value
        return cls.from_fraction(value, prec)

    # -- inspection ---------------------------------------------------
    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def contains(self, value):
        value = _as_fraction(value)
        return _as_fraction(self.lo) <= value <= _as_fraction(self.hi)

    def sign(self):
        """+1 or -1 when the interval excludes zero, otherwise 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def width(self):
        return gmpy2.context(precision=self.prec, round=gmpy2.RoundUp).sub(self.hi, self.lo)

    def mid(self):
        return (_as_fraction(self.lo) + _as_fraction(self.hi)) / 2

    def magnitude(self):
        return max(abs(self.lo), abs(self.hi))

    def mignitude(self):
        if self.contains_zero():
            return mpfr(0)
        return min(abs(self.lo), abs(self.hi))

    def relative_width(self):
        m = self.mignitude()
        if m == 0:
            return mpfr("inf")
        return self.width() / m

    def __float__(self):
        return float((self.lo + self.hi) / 2)

    def __repr__(self):
        return f"Interval([{self.lo}, {self.hi}])"

    # -- arithmetic ---------------------------------------------------
    def _other(self, other):
        if isinstance(other, Interval):
            return other
        return Interval.from_fraction(other, self.prec)

    def __neg__(self):
        return Interval(-self.hi, -self.lo, self.prec)

    def __add__(self, other):
        other = self._other(other)
        down, up = _contexts(self.prec)
        return Interval(down.add(self.lo, other.lo), up.add(self.hi, other.hi), self.prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        down, up = _contexts(self.prec)
        return Interval(down.sub(self.lo, other.hi), up.sub(self.hi, other.lo), self.prec)

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        down, up = _contexts(self.prec)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a >= 0 and c >= 0:
            return Interval(down.mul(a, c), up.mul(b, d), self.prec)
        if b <= 0 and d <= 0:
            return Interval(down.mul(b, d), up.mul(a, c), self.prec)
        if a >= 0 and d <= 0:
            return Interval(down.mul(b, c), up.mul(a, d), self.prec)
        if b <= 0 and c >= 0:
            return Interval(down.mul(a, d), up.mul(b, c), self.prec)
        lows = (down.mul(a, c), down.mul(a, d), down.mul(b, c), down.mul(b, d))
        highs = (up.mul(a, c), up.mul(a, d), up.mul(b, c), up.mul(b, d))
        return Interval(min(lows), max(highs), self.prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        if other.contains_zero():
            raise ZeroDivisionError("interval division by an interval containing 0")
        down, up = _contexts(self.prec)
        inv = Interval(down.div(1, other.hi), up.div(1, other.lo), self.prec)
        return self * inv

    def __rtruediv__(self, other):
        return self._other(other) / self

    def hull(self, other):
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi), self.prec)

    def intersect(self, other):
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi, self.prec)

    def square(self):
        down, up = _contexts(self.prec)
        if self.lo >= 0:
            return Interval(down.mul(self.lo, self.lo), up.mul(self.hi, self.hi), self.prec)
        if self.hi <= 0:
            return Interval(down.mul(self.hi, self.hi), up.mul(self.lo, self.lo), self.prec)
        m = max(-self.lo, self.hi)
        return Interval(mpfr(0), up.mul(m, m), self.prec)

    def pow_int(self, n):
        if n == 0:
            return Interval(mpfr(1), mpfr(1), self.prec)
        if n < 0:
            return Interval(mpfr(1), mpfr(1), self.prec) / self.pow_int(-n)
        if n % 2 == 0:
            return self.square().pow_int(n // 2) if n > 2 else self.square()
        down, up = _contexts(self.prec)
        return Interval(down.pow(self.lo, n), up.pow(self.hi, n), self.prec)

    def pow_rational(self, exponent):
        """``self ** exponent`` for a nonnegative interval and rational exponent.

        ``0 ** e`` is taken as 0 for ``e > 0``; a negative exponent needs a
        strictly positive interval.
        """
        e = _as_fraction(exponent)
        if self.lo < 0:
            raise ValueError("rational power of an interval with negative part")
        if e == 0:
            return Interval(mpfr(1), mpfr(1), self.prec)
        down, up = _contexts(self.prec)
        p, q = e.numerator, e.denominator
        if p > 0:
            if q == 1:
                return Interval(down.pow(self.lo, p), up.pow(self.hi, p), self.prec)
            lo = down.rootn(down.pow(self.lo, p), q)
            hi = up.rootn(up.pow(self.hi, p), q)
            return Interval(lo, hi, self.prec)
        if self.lo == 0:
            raise ZeroDivisionError("negative power of an interval touching 0")
        p = -p
        if q == 1:
            big_hi = up.pow(self.hi, p)
            big_lo = down.pow(self.lo, p)
        else:
            big_hi = up.rootn(up.pow(self.hi, p), q)
            big_lo = down.rootn(down.pow(self.lo, p), q)
        return Interval(down.div(1, big_hi), up.div(1, big_lo), self.prec)

    def exp(self):
        down, up = _contexts(self.prec)
        return Interval(down.exp(self.lo), up.exp(self.hi), self.prec)

    def log(self):
        if self.lo <= 0:
            raise ValueError("log of an interval touching 0")
        down, up = _contexts(self.prec)
        return Interval(down.log(self.lo), up.log(self.hi), self.prec)


def one_minus(x):
    down, up = _contexts(x.prec)
    return Interval(down.sub(1, x.hi), up.sub(1, x.lo), x.prec)


def interval_sum(items, prec):
    total = Interval(mpfr(0), mpfr(0), prec)
    for item in items:
        total = total + item
    return total
