"""Rational maps ``phi = x^a (1-x)^b P^m / Q^m`` and odd/odd exponent
approximation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ..errors import DegenerateInput
from ..exact import Polynomial

MAX_STERN_BROCOT_STEPS = 1_000_000


def _is_odd_odd(r):
    return r.numerator % 2 == 1 and r.denominator % 2 == 1


def odd_rational_approx(x, eps):
    """Fraction with odd numerator and odd denominator close to ``x``.

    Walks the Stern-Brocot tree towards ``|x|`` and returns the first
    odd/odd node within ``eps * min(1, |x|)`` (``eps`` when ``x = 0``).  If
    the walk lands on ``x`` itself with the wrong parity it keeps approaching
    ``x`` from below.  The result always satisfies ``|r - x| < eps``.
    """
    x = Fraction(x) if not isinstance(x, Fraction) else x
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if _is_odd_odd(x):
        return x
    sign = -1 if x < 0 else 1
    target = abs(x)
    tol = eps * min(Fraction(1), target) if target else eps
    lo_n, lo_d, hi_n, hi_d = 0, 1, 1, 0
    for _ in range(MAX_STERN_BROCOT_STEPS):
        med = Fraction(lo_n + hi_n, lo_d + hi_d)
        if _is_odd_odd(med) and abs(med - target) < tol:
            return sign * med
        if med < target:
            lo_n, lo_d = med.numerator, med.denominator
        else:
            hi_n, hi_d = med.numerator, med.denominator
    raise ArithmeticError("no odd/odd approximant found within the step budget")


@dataclass(frozen=True)
class RationalMap:
    """``N / D`` with coprime rational polynomials; ``degree = max(deg N, deg D)``."""

    N: Polynomial
    D: Polynomial

    def __post_init__(self):
        if self.N.is_zero() or self.D.is_zero():
            raise DegenerateInput("numerator and denominator must be nonzero")
        g = self.N.gcd(self.D)
        N, D = self.N, self.D
        if g.degree > 0:
            N, D = N.exact_div(g), D.exact_div(g)
        # scale so that D is monic
        lead = D.leading
        object.__setattr__(self, "N", N.scale(1 / lead))
        object.__setattr__(self, "D", D.scale(1 / lead))

    @property
    def degree(self):
        return max(self.N.degree, self.D.degree)

    def critical_polynomial(self):
        return self.N.derivative() * self.D - self.N * self.D.derivative()

    def value_at_infinity(self):
        """``phi(oo)`` as a Fraction, or None for a pole at infinity."""
        if self.N.degree > self.D.degree:
            return None
        if self.N.degree < self.D.degree:
            return Fraction(0)
        return self.N.leading / self.D.leading

    def local_degree_at_infinity(self):
        dn, dd = self.N.degree, self.D.degree
        if dn != dd:
            return abs(dn - dd)
        c = self.N.leading / self.D.leading
        rest = self.N - self.D.scale(c)
        return self.degree - max(rest.degree, 0) if not rest.is_zero() else self.degree

    def __call__(self, z):
        return self.N.eval_complex(z) / self.D.eval_complex(z)

    def to_json(self):
        return {"N": [str(c) for c in self.N.coeffs], "D": [str(c) for c in self.D.coeffs]}


@dataclass(frozen=True)
class PhiSpec:
    """``phi = x^a (1-x)^b P^m / Q^m``."""

    a: int
    b: int
    m: int
    P: Polynomial
    Q: Polynomial

    def __post_init__(self):
        if self.P.is_zero() or self.Q.is_zero():
            raise DegenerateInput("P and Q must be nonzero")
        if self.m < 1:
            raise ValueError("m must be a positive integer")

    @property
    def satisfies_parity(self):
        return self.a % 2 == 1 and self.b % 2 == 1 and self.m % 2 == 1

    @property
    def polynomial_case(self):
        return self.a >= 0 and self.b >= 0

    def rational_map(self):
        x = Polynomial.x()
        one_minus = Polynomial((1, -1))
        N = self.P ** self.m
        D = self.Q ** self.m
        N = N * (x ** max(self.a, 0)) * (one_minus ** max(self.b, 0))
        D = D * (x ** max(-self.a, 0)) * (one_minus ** max(-self.b, 0))
        return RationalMap(N, D)

    def to_json(self):
        return {
            "a": self.a,
            "b": self.b,
            "m": self.m,
            "P": [str(c) for c in self.P.coeffs],
            "Q": [str(c) for c in self.Q.coeffs],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            int(data["a"]),
            int(data["b"]),
            int(data.get("m", 1)),
            Polynomial([Fraction(c) for c in data.get("P", ["1"])]),
            Polynomial([Fraction(c) for c in data.get("Q", ["1"])]),
        )


def _strip_root(poly, root):
    """Split ``poly = (x - root)^k * rest`` with ``rest(root) != 0``."""
    lin = Polynomial((-root, 1))
    k = 0
    while poly.degree > 0 and poly(root) == 0:
        poly = poly.exact_div(lin)
        k += 1
    return poly, k


def build_phi(alpha, beta, P, Q):
    """Clear the denominators of ``alpha`` and ``beta`` by an odd power ``m``.

    ``P`` and ``Q`` are made coprime; factors ``x`` and ``1 - x`` are moved
    from ``P`` and ``Q`` into the exponents ``a`` and ``b``.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if P.is_zero() or Q.is_zero():
        raise DegenerateInput("P and Q must be nonzero")
    for r in (alpha, beta):
        if not _is_odd_odd(r):
            raise ValueError(f"{r} does not have odd numerator and denominator")
    m = lcm(alpha.denominator, beta.denominator)
    g = P.gcd(Q)
    if g.degree > 0:
        P, Q = P.exact_div(g), Q.exact_div(g)
    a, b = int(m * alpha), int(m * beta)
    P, kp0 = _strip_root(P, Fraction(0))
    Q, kq0 = _strip_root(Q, Fraction(0))
    P, kp1 = _strip_root(P, Fraction(1))
    Q, kq1 = _strip_root(Q, Fraction(1))
    a += m * (kp0 - kq0)
    # (x - 1)^k = (-1)^k (1 - x)^k; the sign goes into P
    if (kp1 - kq1) % 2:
        P = -P if m % 2 else P
    b += m * (kp1 - kq1)
    return PhiSpec(a, b, m, P, Q)
