"""From a system ``f = g = 0`` (``f`` a t-nomial, ``g`` a trinomial in two
positive variables) to a univariate fewnomial on (0, 1) with the same number
of positive solutions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .bounds import collinear_bound, new_bound_value
from .errors import (
    CollinearInput,
    DegenerateInput,
    InfiniteSolutionFamily,
    NoPositiveSolutions,
)
from .exact import Polynomial
from .fewnomial import FewnomialFunction, FewnomialTerm, count_roots_unit_interval
from .intervals import Interval, one_minus
from .radicals import AlgebraicElement, PowerProduct, RealAlgebraic
from math import floor


def _frac(value):
    return value if isinstance(value, Fraction) else Fraction(value)


def _triples(items):
    return tuple(tuple(_frac(v) for v in item) for item in items)


@dataclass(frozen=True)
class BivariateSparseSystem:
    """``f = sum a_i u^alpha_i v^beta_i`` and ``g = sum b_j u^gamma_j v^delta_j``.

    Terms are ``(coefficient, u-exponent, v-exponent)`` triples of Fractions.
    """

    f_terms: tuple
    g_terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "f_terms", _triples(self.f_terms))
        object.__setattr__(self, "g_terms", _triples(self.g_terms))
        if not self.f_terms:
            raise DegenerateInput("f needs at least one term")
        if any(len(term) != 3 for term in self.f_terms + self.g_terms):
            raise ValueError("terms are (coefficient, exponent, exponent) triples")
        if len(self.g_terms) != 3 or any(b == 0 for b, _, _ in self.g_terms):
            raise DegenerateInput("g must have exactly three nonzero terms")
        if any(a == 0 for a, _, _ in self.f_terms):
            raise DegenerateInput("f coefficients must be nonzero")
        if len({(al, be) for _, al, be in self.f_terms}) != len(self.f_terms):
            raise DegenerateInput("f exponent pairs must be distinct")
        if len({(ga, de) for _, ga, de in self.g_terms}) != 3:
            raise DegenerateInput("g exponent pairs must be distinct")

    @property
    def t(self):
        return len(self.f_terms)

    def to_json(self):
        def enc(items, names):
            return [dict(zip(names, map(str, item))) for item in items]

        return {
            "f": enc(self.f_terms, ("a", "alpha", "beta")),
            "g": enc(self.g_terms, ("b", "gamma", "delta")),
        }

    @classmethod
    def from_json(cls, data):
        f = [(Fraction(x["a"]), Fraction(x["alpha"]), Fraction(x["beta"])) for x in data["f"]]
        g = [(Fraction(x["b"]), Fraction(x["gamma"]), Fraction(x["delta"])) for x in data["g"]]
        return cls(f, g)

    def evaluate(self, u, v):
        """Interval enclosures of ``(f(u, v), g(u, v))`` for positive interval inputs."""

        def side(terms):
            total = Interval.from_fraction(0, u.prec)
            for c, e1, e2 in terms:
                total = total + Interval.from_fraction(c, u.prec) * _pow(u, e1) * _pow(v, e2)
            return total

        return side(self.f_terms), side(self.g_terms)


def _pow(x, e):
    return x.pow_rational(e) if e >= 0 else Interval.from_fraction(1, x.prec) / x.pow_rational(-e)


# ---------------------------------------------------------------------------
# normalization and the monomial change


def normalize_trinomial(system):
    """Rescale ``g`` to ``-1 + b2 u^g2 v^d2 + b3 u^g3 v^d3`` with ``b2, b3 > 0``.

    Raises NoPositiveSolutions when all coefficients of ``g`` share a sign.
    """
    signs = [b > 0 for b, _, _ in system.g_terms]
    if all(signs) or not any(signs):
        raise NoPositiveSolutions("g has coefficients of a single sign")
    lone = next(i for i in range(3) if signs.count(signs[i]) == 1)
    b1, g1, d1 = system.g_terms[lone]
    others = [system.g_terms[i] for i in range(3) if i != lone]
    g = [(Fraction(-1), Fraction(0), Fraction(0))] + [
        (b / -b1, ga - g1, de - d1) for b, ga, de in others
    ]
    return BivariateSparseSystem(system.f_terms, g)


def is_normalized(g_terms):
    (b1, g1, d1), (b2, _, _), (b3, _, _) = g_terms
    return b1 == -1 and g1 == 0 and d1 == 0 and b2 > 0 and b3 > 0


def _determinant(g_terms):
    (_, g1, d1), (_, g2, d2), (_, g3, d3) = g_terms
    # exponent differences make the test independent of the normalization
    return (g2 - g1) * (d3 - d1) - (g3 - g1) * (d2 - d1)


def detect_collinear(g_terms):
    """True when the two non-constant exponent vectors of ``g`` are collinear."""
    if isinstance(g_terms, BivariateSparseSystem):
        g_terms = g_terms.g_terms
    return _determinant(_triples(g_terms)) == 0


@dataclass
class ReductionResult:
    F: FewnomialFunction
    collinear: bool
    trace: dict = field(default_factory=dict)
    exponents: tuple = ()

    def to_json(self):
        return {"F": self.F.to_json(), "collinear": self.collinear, "trace": self.trace}


def monomial_change(system):
    """Reduce a normalized, non-collinear system to ``F`` on (0, 1).

    With ``x = b2 u^g2 v^d2`` and ``y = b3 u^g3 v^d3`` the trinomial becomes
    ``x + y = 1`` and each ``a u^alpha v^beta`` becomes
    ``a b2^-k b3^-l x^k y^l``.
    """
    if not is_normalized(system.g_terms):
        system = normalize_trinomial(system)
    (_, _, _), (b2, g2, d2), (b3, g3, d3) = system.g_terms
    det = g2 * d3 - g3 * d2
    if det == 0:
        raise CollinearInput("exponent vectors of g are collinear")
    terms = []
    exponents = []
    for a, al, be in system.f_terms:
        k = (al * d3 - be * g3) / det
        l = (g2 * be - d2 * al) / det
        c = PowerProduct([(abs(a), 1), (b2, -k), (b3, -l)], 1 if a > 0 else -1)
        terms.append(FewnomialTerm(c, k, l))
        exponents.append((k, l))
    trace = {
        "g": [[str(v) for v in term] for term in system.g_terms],
        "x": f"{b2} u^({g2}) v^({d2})",
        "y": f"{b3} u^({g3}) v^({d3})",
        "determinant": str(det),
    }
    return ReductionResult(FewnomialFunction(terms), False, trace, tuple(exponents))


def witness_to_uv(system, box, prec=128):
    """Map a box of ``x`` values back to enclosures of ``(u, v)``."""
    if not is_normalized(system.g_terms):
        system = normalize_trinomial(system)
    (_, _, _), (b2, g2, d2), (b3, g3, d3) = system.g_terms
    det = g2 * d3 - g3 * d2
    X = Interval.from_fractions(box[0], box[1], prec)
    lx = (X / Interval.from_fraction(b2, prec)).log()
    ly = (one_minus(X) / Interval.from_fraction(b3, prec)).log()
    # [g2 d2; g3 d3] (log u, log v) = (lx, ly)
    log_u = (lx * Interval.from_fraction(d3, prec) - ly * Interval.from_fraction(d2, prec)) / Interval.from_fraction(det, prec)
    log_v = (ly * Interval.from_fraction(g2, prec) - lx * Interval.from_fraction(g3, prec)) / Interval.from_fraction(det, prec)
    return log_u.exp(), log_v.exp()


def roundtrip_check(system, box, prec=128):
    """Both ``f`` and ``g`` must admit 0 at the pulled-back witness."""
    u, v = witness_to_uv(system, box, prec)
    fv, gv = system.evaluate(u, v)
    return fv.contains_zero() and gv.contains_zero()


# ---------------------------------------------------------------------------
# the collinear branch


def _primitive_direction(gamma, delta):
    den = lcm(gamma.denominator, delta.denominator)
    p, q = int(gamma * den), int(delta * den)
    g = gcd(p, q)
    p, q = p // g, q // g
    return p, q, gamma / p if p else delta / q


def _laurent_to_poly(coeff_by_exp):
    """``sum c_e z^e`` (integer e, possibly negative) times ``z^-min(e)``."""
    low = min(coeff_by_exp)
    cs = [Fraction(0)] * (max(coeff_by_exp) - low + 1)
    for e, c in coeff_by_exp.items():
        cs[e - low] += c
    return Polynomial(cs), low


@dataclass
class CollinearCount:
    count: int
    roots: list
    parts: list
    rigor: str = "certified"


def count_collinear(system, method="auto", precision=64):
    """Positive solutions when g's exponent vectors are collinear.

    ``g`` then depends on the single monomial ``z = u^p v^q``; each positive
    root ``z0`` of ``g`` leaves the fewnomial ``sum A_l(z0) w^l`` in the
    complementary monomial ``w = u^-q v^p``, counted on (0, 1), at 1 and on
    (1, oo).  Vanishing of every ``A_l(z0)`` means a curve of solutions.
    """
    if not is_normalized(system.g_terms):
        system = normalize_trinomial(system)
    (_, _, _), (b2, g2, d2), (b3, g3, d3) = system.g_terms
    p, q, D2 = _primitive_direction(g2, d2)
    D3 = g3 / p if p else d3 / q
    norm = p * p + q * q
    ks, ls = [], []
    for _, al, be in system.f_terms:
        ks.append(Fraction(al * p + be * q, norm))
        ls.append(Fraction(be * p - al * q, norm))
    # zeta = z^(1/N) turns every z-exponent into an integer
    N = lcm(D2.denominator, D3.denominator, *(k.denominator for k in ks))
    g_poly, _ = _laurent_to_poly({0: Fraction(-1), int(N * D2): b2, int(N * D3): b3})
    zetas = RealAlgebraic.roots_in(g_poly, 0, g_poly.root_bound())
    zetas = [z for z in zetas if z.interval[0] >= 0 and not (z.is_rational and z.interval[0] == 0)]
    total = 0
    parts = []
    rigor = "certified"

    def side(fn):
        nonlocal rigor
        if fn.t < 2:
            return 0
        rc = count_roots_unit_interval(fn, method=method, precision=precision)
        if not rc.certified:
            rigor = "heuristic"
        return rc.count

    shift = -min(int(N * k) for k in ks)
    for zeta in zetas:
        groups = {}
        for (a, _, _), k, l in zip(system.f_terms, ks, ls):
            groups.setdefault(l, {})
            e = int(N * k) + shift
            groups[l][e] = groups[l].get(e, Fraction(0)) + a
        coeffs = {}
        for l, by_exp in groups.items():
            poly, low = _laurent_to_poly(by_exp)
            coeffs[l] = AlgebraicElement(poly.shift(low) if low >= 0 else poly, zeta)
        if all(c.is_zero() for c in coeffs.values()):
            raise InfiniteSolutionFamily("f vanishes on a whole curve of g = 0")
        inner = FewnomialFunction(FewnomialTerm(c, l, 0) for l, c in coeffs.items())
        outer = FewnomialFunction(FewnomialTerm(c, -l, 0) for l, c in coeffs.items())
        at_one = sum((c for c in coeffs.values()), AlgebraicElement(Polynomial(), zeta)).is_zero()
        n_in, n_out = side(inner), side(outer)
        n = n_in + n_out + int(at_one)
        parts.append({"zeta": float(zeta), "below_one": n_in, "at_one": int(at_one), "above_one": n_out})
        total += n
    return CollinearCount(total, zetas, parts, rigor)


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class PositiveSolutionCount:
    count: int
    rigor: str
    bound: int
    collinear: bool
    root_count: object = None
    reduction: ReductionResult | None = None
    collinear_parts: list = field(default_factory=list)

    @property
    def bound_holds(self):
        return self.count <= self.bound

    def to_json(self):
        out = {
            "count": self.count,
            "rigor": self.rigor,
            "bound": self.bound,
            "bound_holds": self.bound_holds,
            "collinear": self.collinear,
        }
        if self.root_count is not None:
            out["root_count"] = self.root_count.to_json()
        if self.collinear_parts:
            out["collinear_parts"] = self.collinear_parts
        return out


def count_positive_solutions(system, method="auto", precision=64):
    """Number of positive solutions and the applicable upper bound.

    The bound is the cubic formula in ``t`` for the generic case and
    ``2t - 2`` in the collinear case.
    """
    normalized = normalize_trinomial(system)
    t = system.t
    if detect_collinear(normalized):
        result = count_collinear(normalized, method=method, precision=precision)
        return PositiveSolutionCount(
            result.count, result.rigor, collinear_bound(t), True, collinear_parts=result.parts
        )
    reduction = monomial_change(normalized)
    rc = count_roots_unit_interval(reduction.F, method=method, precision=precision)
    bound = max(0, floor(new_bound_value(t)))
    return PositiveSolutionCount(rc.count, rc.rigor, bound, False, rc, reduction)
