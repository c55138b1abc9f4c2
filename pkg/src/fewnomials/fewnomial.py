"""Fewnomials ``F(x) = sum c_i x**k_i (1-x)**l_i`` on the open unit interval
and certified counting of their roots there."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, InconclusiveBox, ZeroFunction
from .exact import Polynomial, count_with_multiplicity, isolate_roots, refine_root, sturm_count
from .intervals import Interval, _as_fraction
from .radicals import PowerSum, as_coefficient

EPS_START = Fraction(1, 2**20)
EPS_CAP = Fraction(1, 2**200)
MAX_DEPTH = 120
# above this degree the auto route tries interval counting before Sturm
AUTO_STURM_DEGREE = 64
BOUNDARY_RECURSION = 8
_SPLIT = Fraction(33, 64)
_ALT_SPLITS = (Fraction(29, 64), Fraction(37, 64), Fraction(27, 64), Fraction(39, 64))
_CUTS = (Fraction(1, 2), Fraction(33, 64), Fraction(31, 64), Fraction(35, 64), Fraction(29, 64))


def _frac(value):
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class FewnomialTerm:
    coefficient: object
    x_exp: Fraction
    one_minus_x_exp: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coefficient", as_coefficient(self.coefficient))
        object.__setattr__(self, "x_exp", _frac(self.x_exp))
        object.__setattr__(self, "one_minus_x_exp", _frac(self.one_minus_x_exp))

    @property
    def exponents(self):
        return (self.x_exp, self.one_minus_x_exp)


class FewnomialFunction:
    """Sum of terms with pairwise distinct exponent pairs.

    Like terms are merged on construction and zero coefficients dropped, so
    the stored term count ``t`` can be smaller than the number of inputs.
    """

    __slots__ = ("terms", "_coeff_cache", "_derivative")

    def __init__(self, terms):
        merged = {}
        for term in terms:
            if not isinstance(term, FewnomialTerm):
                term = FewnomialTerm(*term)
            key = term.exponents
            if key in merged:
                merged[key] = merged[key] + term.coefficient
            else:
                merged[key] = term.coefficient
        self.terms = tuple(
            FewnomialTerm(c, k, l) for (k, l), c in sorted(merged.items()) if not c.is_zero()
        )
        self._coeff_cache = {}
        self._derivative = None

    @classmethod
    def from_pairs(cls, items):
        """Build from ``(coefficient, k, l)`` triples."""
        return cls(FewnomialTerm(c, k, l) for c, k, l in items)

    @classmethod
    def from_polynomial(cls, poly, x_shift=0, one_minus_shift=0):
        return cls(
            FewnomialTerm(c, n + _frac(x_shift), _frac(one_minus_shift))
            for n, c in enumerate(poly.coeffs)
            if c
        )

    @property
    def t(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        body = " + ".join(
            f"[{t.coefficient!r}] x^({t.x_exp}) (1-x)^({t.one_minus_x_exp})" for t in self.terms
        )
        return f"FewnomialFunction({body or '0'})"

    def __eq__(self, other):
        if not isinstance(other, FewnomialFunction):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    # -- algebra ------------------------------------------------------
    def __neg__(self):
        return FewnomialFunction(FewnomialTerm(-t.coefficient, t.x_exp, t.one_minus_x_exp) for t in self.terms)

    def __add__(self, other):
        return FewnomialFunction(self.terms + other.terms)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return FewnomialFunction(
            FewnomialTerm(t.coefficient * c, t.x_exp, t.one_minus_x_exp) for t in self.terms
        )

    def times_monomial(self, gamma, delta):
        """Multiply every term by ``x**gamma (1-x)**delta``."""
        gamma, delta = _frac(gamma), _frac(delta)
        return FewnomialFunction(
            FewnomialTerm(t.coefficient, t.x_exp + gamma, t.one_minus_x_exp + delta) for t in self.terms
        )

    def normalized(self):
        """Divide out ``x**k_min (1-x)**l_min``; roots in (0, 1) are unchanged."""
        if not self.terms:
            return self
        kmin = min(t.x_exp for t in self.terms)
        lmin = min(t.one_minus_x_exp for t in self.terms)
        if kmin == 0 and lmin == 0:
            return self
        return self.times_monomial(-kmin, -lmin)

    def reflected(self):
        """``F(1 - x)``."""
        return FewnomialFunction(
            FewnomialTerm(t.coefficient, t.one_minus_x_exp, t.x_exp) for t in self.terms
        )

    def derivative(self):
        if self._derivative is None:
            self._derivative = derivative_factorized(self)
        return self._derivative

    def has_integer_exponents(self):
        return all(t.x_exp.denominator == 1 and t.one_minus_x_exp.denominator == 1 for t in self.terms)

    def has_rational_coefficients(self):
        return all(isinstance(t.coefficient, PowerSum) and t.coefficient.is_rational() for t in self.terms)

    def to_polynomial(self):
        """Exact polynomial with the same roots in (0, 1), or None.

        Needs integer exponents and rational coefficients; the result is
        ``F * x**(-k_min) * (1-x)**(-l_min)``.
        """
        if not self.terms or not (self.has_integer_exponents() and self.has_rational_coefficients()):
            return None
        kmin = min(t.x_exp for t in self.terms)
        lmin = min(t.one_minus_x_exp for t in self.terms)
        out = Polynomial()
        for t in self.terms:
            k = int(t.x_exp - kmin)
            l = int(t.one_minus_x_exp - lmin)
            out = out + (Polynomial.one_minus_x_power(l).shift(k)).scale(t.coefficient.as_fraction())
        return out

    # -- numerics -----------------------------------------------------
    def coefficient_enclosures(self, prec):
        cached = self._coeff_cache.get(prec)
        if cached is None:
            cached = [t.coefficient.enclose(prec) for t in self.terms]
            self._coeff_cache[prec] = cached
        return cached

    def __call__(self, x):
        """Floating-point value, for plotting and brute-force oracles."""
        x = float(x)
        return sum(
            float(t.coefficient) * x ** float(t.x_exp) * (1.0 - x) ** float(t.one_minus_x_exp)
            for t in self.terms
        )

    def to_json(self):
        return {
            "terms": [
                {
                    "c": t.coefficient.to_json(),
                    "k": str(t.x_exp),
                    "l": str(t.one_minus_x_exp),
                }
                for t in self.terms
            ]
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            FewnomialTerm(PowerSum.from_json(item["c"]), Fraction(item["k"]), Fraction(item["l"]))
            for item in data["terms"]
        )


def derivative_factorized(F):
    """Termwise ``c x^k (1-x)^l -> c k x^(k-1) (1-x)^l - c l x^k (1-x)^(l-1)``."""
    out = []
    for t in F.terms:
        k, l = t.x_exp, t.one_minus_x_exp
        if k:
            out.append(FewnomialTerm(t.coefficient * k, k - 1, l))
        if l:
            out.append(FewnomialTerm(t.coefficient * (-l), k, l - 1))
    return FewnomialFunction(out)


# ---------------------------------------------------------------------------
# interval evaluation


def _power_table(base, exponents, allow_zero):
    table = {}
    for e in exponents:
        if e == 0:
            table[e] = Interval.from_fraction(1, base.prec)
        elif base.lo <= 0 and not allow_zero:
            raise DomainError("power of an interval touching 0")
        else:
            table[e] = base.pow_rational(e)
    return table


def _enclose_many(functions, lo, hi, prec, allow_boundary=False):
    """Enclosures of several fewnomials over ``[lo, hi]`` sharing power tables."""
    X = Interval.from_fractions(lo, hi, prec)
    # 1 - x from the exact endpoints: rounding 1 - hi at low precision
    # would push the lower end to 0 near x = 1
    Y = Interval.from_fractions(max(1 - hi, Fraction(0)), 1 - lo, prec)
    xs = {t.x_exp for F in functions for t in F.terms}
    ys = {t.one_minus_x_exp for F in functions for t in F.terms}
    px = _power_table(X, xs, allow_boundary)
    py = _power_table(Y, ys, allow_boundary)
    out = []
    for F in functions:
        total = Interval.from_fraction(0, prec)
        for t, c in zip(F.terms, F.coefficient_enclosures(prec)):
            total = total + c * px[t.x_exp] * py[t.one_minus_x_exp]
        out.append(total)
    return out


def eval_interval(F, x, precision=64):
    """Enclosure of ``{F(s) : s in x}`` for a rational interval strictly inside (0, 1).

    ``x`` is a rational number, a ``(lo, hi)`` pair or an ``Interval``.
    """
    if precision < 32:
        raise ValueError("precision must be at least 32 bits")
    if isinstance(x, Interval):
        lo, hi = _as_fraction(x.lo), _as_fraction(x.hi)
    elif isinstance(x, tuple):
        lo, hi = _frac(x[0]), _frac(x[1])
    else:
        lo = hi = _frac(x)
    if lo <= 0 or hi >= 1:
        raise DomainError("interval must lie strictly inside (0, 1)")
    if lo > hi:
        raise ValueError("empty interval")
    (naive,) = _enclose_many([F], lo, hi, precision)
    if lo == hi or F.is_zero():
        return naive
    dF = F.derivative()
    mid = (lo + hi) / 2
    fm, dfx = _enclose_many([F], mid, mid, precision)[0], _enclose_many([dF], lo, hi, precision)[0]
    centred = fm + dfx * Interval.from_fractions(lo - mid, hi - mid, precision)
    return naive.intersect(centred) or naive


# ---------------------------------------------------------------------------
# root counting


@dataclass
class RootCount:
    count: int
    witnesses: list
    rigor: str = "certified"
    boundary_margin: Fraction = Fraction(0)
    method: str = "interval"
    multiplicity_total: int | None = None
    inconclusive: list = field(default_factory=list)

    @property
    def certified(self):
        return self.rigor == "certified"

    def to_json(self):
        return {
            "count": self.count,
            "rigor": self.rigor,
            "method": self.method,
            "multiplicity_total": self.multiplicity_total,
            "boundary_margin": str(self.boundary_margin),
            "witnesses": [[str(a), str(b)] for a, b in self.witnesses],
            "inconclusive": [[str(a), str(b)] for a, b in self.inconclusive],
        }


def _point_sign(F, p, prec):
    for extra in (0, 64, 192, 448):
        (v,) = _enclose_many([F], p, p, prec + extra)
        s = v.sign()
        if s:
            return s
    return 0


def _clear_boundary(G, prec, level=0):
    """Largest ``eps`` (a power of two) with ``G`` root-free on ``(0, eps]``.

    ``G`` must be normalized (minimal exponents zero).  Returns None when the
    margin cap is reached without certification.
    """
    if level > BOUNDARY_RECURSION:
        return None
    dominant = None
    for t in G.terms:
        if t.x_exp == 0:
            dominant = t.coefficient if dominant is None else dominant + t.coefficient
    if dominant is None or dominant.is_zero():
        # G(0+) = 0: G is root-free near 0 as soon as G' is
        D = G.derivative().normalized()
        if D.is_zero():
            return None
        return _clear_boundary(D, prec, level + 1)
    eps = EPS_START
    while eps >= EPS_CAP:
        (v,) = _enclose_many([G], Fraction(0), eps, prec, allow_boundary=True)
        if v.sign():
            return eps
        eps /= 2
    return None


def _count_polynomial(F, poly):
    sqf = poly.squarefree_part()
    witnesses = []
    for a, b in isolate_roots(sqf, 0, 1):
        # keep witnesses strictly inside (0, 1)
        while a != b and (a == 0 or b == 1):
            a, b = refine_root(sqf, (a, b), (b - a) / 2)
        witnesses.append((a, b))
    return RootCount(
        count=len(witnesses),
        witnesses=witnesses,
        rigor="certified",
        method="sturm",
        multiplicity_total=count_with_multiplicity(poly, 0, 1),
    )


def count_roots_unit_interval(F, method="auto", precision=64, max_depth=MAX_DEPTH, strict=False):
    """Count the distinct roots of ``F`` in (0, 1).

    ``method`` is ``"auto"`` (exact Sturm counting when the exponents are
    integers and the coefficients rational, interval subdivision otherwise),
    ``"exact"`` or ``"interval"``.  A box that cannot be certified within
    ``max_depth`` bisections downgrades the result to ``rigor="heuristic"``,
    or raises ``InconclusiveBox`` when ``strict`` is set.
    """
    if F.is_zero():
        raise ZeroFunction("F is identically zero")
    if method not in ("auto", "exact", "interval"):
        raise ValueError(f"unknown method {method!r}")
    if method != "interval":
        poly = F.to_polynomial()
        if poly is not None:
            if method == "auto" and poly.degree > AUTO_STURM_DEGREE:
                rc = _count_interval(F, precision, max_depth, False)
                if rc.certified:
                    return rc
            return _count_polynomial(F, poly)
        if method == "exact":
            raise ValueError("exact counting needs integer exponents and rational coefficients")
    return _count_interval(F, precision, max_depth, strict)


def _count_interval(F, precision, max_depth, strict):
    G = F.normalized()
    if G.t == 1:
        return RootCount(0, [], "certified", Fraction(1, 2), "interval", 0)
    rigor = "certified"
    H = G.reflected().normalized()
    eps0 = _clear_boundary(G, precision)
    eps1 = _clear_boundary(H, precision)
    if eps0 is None or eps1 is None:
        rigor = "heuristic"
        if strict:
            raise InconclusiveBox(0, None, "boundary zone could not be excluded")
    eps0 = eps0 or EPS_CAP
    eps1 = eps1 or EPS_CAP

    # the half next to 1 is searched in y = 1 - x, where points near the
    # boundary keep their relative precision
    c = next((c for c in _CUTS if _point_sign(G, c, precision)), None)
    if c is None:
        raise InconclusiveBox(0, None, "no cut point with a certified sign")
    left, bad_left = _subdivide(G, eps0, c, precision, max_depth, strict)
    right, bad_right = _subdivide(H, eps1, 1 - c, precision, max_depth, strict)
    witnesses = left + [(1 - b, 1 - a) for a, b in right]
    inconclusive = bad_left + [(1 - b, 1 - a) for a, b in bad_right]
    if inconclusive:
        rigor = "heuristic"

    # adjacent inconclusive boxes form one cluster; count a cluster as a
    # root when G changes sign across it, or when G' does (an extremum whose
    # enclosure holds 0, most likely a root of even multiplicity)
    extra = 0
    dG = G.derivative()
    for a, b in _clusters(inconclusive):
        sa, sb = _point_sign(G, a, precision + 64), _point_sign(G, b, precision + 64)
        if sa and sb and sa != sb:
            extra += 1
        elif sa and sa == sb:
            da, db = _point_sign(dG, a, precision + 64), _point_sign(dG, b, precision + 64)
            if da and db and da != db:
                extra += 1
    witnesses.sort()
    count = len(witnesses) + extra
    return RootCount(
        count=count,
        witnesses=witnesses,
        rigor=rigor,
        boundary_margin=min(eps0, eps1),
        method="interval",
        multiplicity_total=count if rigor == "certified" else None,
        inconclusive=sorted(inconclusive),
    )


def _subdivide(G, lo, hi, precision, max_depth, strict):
    """Certified root boxes of ``G`` in ``[lo, hi]`` plus the boxes left
    undecided at ``max_depth``."""
    dG = G.derivative()
    witnesses = []
    inconclusive = []
    stack = [(lo, hi, 0)]
    while stack:
        a, b, depth = stack.pop()
        prec = precision + depth
        g_naive, dg = _enclose_many([G, dG], a, b, prec)
        if g_naive.sign():
            continue
        m = (a + b) / 2
        (gm,) = _enclose_many([G], m, m, prec)
        centred = gm + dg * Interval.from_fractions(a - m, b - m, prec)
        if centred.sign():
            continue
        if dg.sign():
            sa, sb = _point_sign(G, a, prec), _point_sign(G, b, prec)
            if sa and sb:
                if sa != sb:
                    witnesses.append((a, b))
                continue
        if depth >= max_depth:
            if strict:
                raise InconclusiveBox(depth, (a, b))
            inconclusive.append((a, b))
            continue
        split = None
        for lam in (_SPLIT,) + _ALT_SPLITS:
            cand = _dyadic_split(a, b, lam)
            if _point_sign(G, cand, prec):
                split = cand
                break
        if split is None:
            split = _dyadic_split(a, b, _SPLIT)
        stack.append((split, b, depth + 1))
        stack.append((a, split, depth + 1))
    return witnesses, inconclusive


def _dyadic_split(a, b, lam):
    """Point near ``a + lam*(b-a)`` with a short dyadic denominator."""
    cand = a + (b - a) * lam
    width = b - a
    k = 12
    while Fraction(1, 2**k) * 4096 > width:
        k += 1
    denom = 2**k
    out = Fraction(round(cand * denom), denom)
    return out if a < out < b else cand


def _clusters(boxes):
    out = []
    for a, b in sorted(boxes):
        if out and out[-1][1] >= a:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


# ---------------------------------------------------------------------------
# multiplicity


@dataclass
class MultiplicityEstimate:
    multiplicity: int
    rigor: str
    box: tuple


def multiplicity_profile(F, box, max_order=12, precision=128, refinements=80):
    """Multiplicity of the root of ``F`` inside ``box``.

    Returns the smallest ``d`` such that ``F, F', ..., F^(d-1)`` all have
    enclosures containing 0 on a (possibly shrunken) box while ``F^(d)`` has a
    certified sign there.  Only ``d = 1`` is a proof (sign change plus a
    monotone box); larger values are reported as heuristic.
    """
    a, b = _frac(box[0]), _frac(box[1])
    if a == b:
        a, b = a - Fraction(1, 2**100), b + Fraction(1, 2**100)
    derivs = [F.normalized()]
    for _ in range(max_order):
        last = derivs[-1]
        derivs.append(last if last.is_zero() else last.derivative().normalized())

    def enclose(fn, lo, hi):
        if fn.is_zero():
            return Interval.from_fraction(0, precision)
        return _enclose_many([fn], lo, hi, precision)[0]

    def order_on(lo, hi):
        for d in range(max_order + 1):
            if enclose(derivs[d], lo, hi).sign():
                return d
        return None

    G = derivs[0]
    for _ in range(refinements):
        d = order_on(a, b)
        if d == 0:
            raise InconclusiveBox(0, (a, b), "box does not contain a root")
        if d == 1:
            sa, sb = _point_sign(G, a, precision), _point_sign(G, b, precision)
            if sa and sb and sa != sb:
                return MultiplicityEstimate(1, "certified", (a, b))
        elif d is not None:
            return MultiplicityEstimate(d, "heuristic", (a, b))
        m = _dyadic_split(a, b, _SPLIT)
        halves = [(a, m), (m, b)]
        keep = [h for h in halves if order_on(*h) != 0]
        if not keep:
            raise InconclusiveBox(0, (a, b), "box does not contain a root")
        if len(keep) == 2:
            sa, sm = _point_sign(G, a, precision), _point_sign(G, m, precision)
            keep = [halves[0]] if sa and sm and sa != sm else [halves[1]] if sa and sm else keep
        a, b = keep[0]
    raise InconclusiveBox(refinements, (a, b), "no derivative with certified sign")


def sturm_count_of(F):
    """Sturm count of the polynomial expansion (integer exponents only)."""
    poly = F.to_polynomial()
    if poly is None:
        raise ValueError("needs integer exponents and rational coefficients")
    return sturm_count(poly, 0, 1)
