"""Seeded random instances, batch verification and a simple maximizer.

Every instance is a pure function of ``(RunConfig, index)``: the per-index
seed is ``instance_seed(cfg.seed, index)``, the first 8 bytes of
``blake2b("fewnomials:<seed>:<index>")`` read big-endian, and drives its own
``random.Random``.  Records therefore reproduce exactly across runs,
machines and worker counts.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from math import floor
from pathlib import Path

from .bounds import new_bound, new_bound_value
from .errors import (
    DegenerateInput,
    FewnomialError,
    HypothesisUnmet,
    InconclusiveBox,
    NoPositiveSolutions,
    PrecisionExhausted,
    ZeroFunction,
)
from .exact import Polynomial, sturm_count
from .fewnomial import FewnomialFunction, FewnomialTerm, count_roots_unit_interval
from .reduction import BivariateSparseSystem, count_positive_solutions, detect_collinear
from .wronskian import audit_recursion, r_penultimate_form, wronskian_factorized

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MODES = ("theorem1", "theorem2", "lemma4", "oracle", "dessin", "proposition")
_MASK64 = (1 << 64) - 1


def instance_seed(seed, index):
    """64-bit seed of instance ``index`` in the run seeded by ``seed``."""
    digest = hashlib.blake2b(f"fewnomials:{seed & _MASK64}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def instance_rng(seed, index):
    return random.Random(instance_seed(seed, index))


@dataclass
class RunConfig:
    mode: str = "theorem1"
    count: int = 100
    t: int = 3
    numerator_range: tuple = (-5, 5)
    denominator_range: tuple = (1, 3)
    coefficient_range: tuple = (-9, 9)
    max_degree: int = 6
    integer_exponents: bool = False
    seed: int = 0
    out: str | None = None
    reproducer: str | None = None
    precision: int = 64
    workers: int = 1

    def validate(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.count < 1:
            raise ValueError("instance count must be at least 1")
        for name in ("numerator_range", "denominator_range", "coefficient_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty")
        if self.denominator_range[1] < 1:
            raise ValueError("denominator_range must contain a positive integer")
        if self.coefficient_range == (0, 0):
            raise ValueError("coefficient_range must contain a nonzero value")
        if self.t < 1 or self.max_degree < 0:
            raise ValueError("t must be positive and max_degree nonnegative")
        return self

    def to_json(self):
        out = asdict(self)
        for name in ("numerator_range", "denominator_range", "coefficient_range"):
            out[name] = list(out[name])
        return out

    @classmethod
    def from_json(cls, data):
        data = dict(data)
        for name in ("numerator_range", "denominator_range", "coefficient_range"):
            if name in data:
                data[name] = tuple(data[name])
        return cls(**data)


# ---------------------------------------------------------------------------
# generators


def _nonzero(rng, lo, hi):
    while True:
        c = rng.randint(lo, hi)
        if c:
            return Fraction(c)


def _exponent(rng, cfg):
    num = rng.randint(*cfg.numerator_range)
    if cfg.integer_exponents:
        return Fraction(num)
    lo = max(cfg.denominator_range[0], 1)
    return Fraction(num, rng.randint(lo, cfg.denominator_range[1]))


def random_system(cfg, seed):
    """A system with ``cfg.t`` terms in ``f`` and a mixed-sign trinomial
    ``g`` with affinely independent exponents."""
    rng = random.Random(seed)
    while True:
        pairs = set()
        while len(pairs) < 3:
            pairs.add((_exponent(rng, cfg), _exponent(rng, cfg)))
        pairs = sorted(pairs)
        signs = [1, 1, 1]
        signs[rng.randrange(3)] = -1
        if rng.random() < 0.5:
            signs = [-s for s in signs]
        g = [(s * abs(_nonzero(rng, *cfg.coefficient_range)), a, b) for s, (a, b) in zip(signs, pairs)]
        if detect_collinear(g):
            continue
        f_pairs = set()
        while len(f_pairs) < cfg.t:
            f_pairs.add((_exponent(rng, cfg), _exponent(rng, cfg)))
        f = [(_nonzero(rng, *cfg.coefficient_range), a, b) for a, b in sorted(f_pairs)]
        return BivariateSparseSystem(f, g)


def random_fewnomial(cfg, seed):
    """``cfg.t`` terms with distinct exponent pairs and nonzero coefficients."""
    rng = random.Random(seed)
    pairs = set()
    while len(pairs) < cfg.t:
        pairs.add((_exponent(rng, cfg), _exponent(rng, cfg)))
    return FewnomialFunction(
        FewnomialTerm(_nonzero(rng, *cfg.coefficient_range), a, b) for a, b in sorted(pairs)
    )


def random_polynomial(rng, max_degree, coefficient_range):
    deg = rng.randint(0, max_degree)
    coeffs = [Fraction(rng.randint(*coefficient_range)) for _ in range(deg)]
    return Polynomial(coeffs + [_nonzero(rng, *coefficient_range)])


def random_thm2(cfg, seed):
    """``(P, Q, alpha, beta)`` with ``x^alpha (1-x)^beta P - Q`` not identically zero."""
    rng = random.Random(seed)
    while True:
        P = random_polynomial(rng, cfg.max_degree, cfg.coefficient_range)
        Q = random_polynomial(rng, cfg.max_degree, cfg.coefficient_range)
        alpha, beta = _exponent(rng, cfg), _exponent(rng, cfg)
        if alpha == 0 and beta == 0 and P == Q:
            continue
        return P, Q, alpha, beta


def random_rational_map(cfg, seed):
    """``N / D`` in lowest terms of degree between 1 and ``cfg.max_degree``."""
    from .dessin.phi import RationalMap

    rng = random.Random(seed)
    while True:
        N = random_polynomial(rng, cfg.max_degree, cfg.coefficient_range)
        D = random_polynomial(rng, cfg.max_degree, cfg.coefficient_range)
        fmap = RationalMap(N, D)
        if 1 <= fmap.degree <= cfg.max_degree:
            return fmap


def _squarefree_factor(rng, cfg):
    while True:
        P = random_polynomial(rng, 2, cfg.coefficient_range)
        if P(0) == 0 or P(1) == 0:
            continue
        if P.degree > 0 and P.gcd(P.derivative()).degree > 0:
            continue
        return P


def random_phi(cfg, seed):
    """Odd ``a``, ``b``, ``m`` and squarefree coprime ``P``, ``Q`` of degree
    at most two that do not vanish at 0 or 1."""
    from .dessin.phi import PhiSpec

    rng = random.Random(seed)
    while True:
        a = rng.choice((-3, -1, 1, 3))
        b = rng.choice((-3, -1, 1, 3))
        m = rng.choice((1, 3))
        P, Q = _squarefree_factor(rng, cfg), _squarefree_factor(rng, cfg)
        if P.gcd(Q).degree > 0:
            continue
        phi = PhiSpec(a, b, m, P, Q)
        if phi.rational_map().degree <= cfg.max_degree:
            return phi


# ---------------------------------------------------------------------------
# records and verification


def _fracs(values):
    return [str(Fraction(v)) for v in values]


@dataclass
class InstanceRecord:
    mode: str
    index: int
    seed: int
    instance: dict
    count: int | None = None
    rigor: str | None = None
    bounds: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    status: str = "pass"
    detail: str = ""
    wall_time: float = 0.0
    schema: int = SCHEMA_VERSION

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, data):
        return cls(**data)

    def comparable(self):
        """The record without its timing, for reproducibility checks."""
        out = self.to_json()
        out.pop("wall_time")
        return out


def _verify_theorem1(cfg, rec, seed):
    system = random_system(cfg, seed)
    rec.instance = system.to_json()
    try:
        result = count_positive_solutions(system, precision=cfg.precision)
    except NoPositiveSolutions:
        rec.count, rec.rigor = 0, "certified"
        rec.bounds["new"] = max(0, floor(new_bound_value(system.t)))
        rec.verdicts["count"] = True
        return
    rec.count, rec.rigor = result.count, result.rigor
    rec.bounds["new"] = result.bound
    if result.rigor != "certified":
        rec.status = "inconclusive"
        return
    rec.verdicts["count"] = result.count <= result.bound
    if result.reduction is not None and not result.collinear:
        F = result.reduction.F
        if F.t >= 2 and F.has_rational_coefficients() and F.has_integer_exponents():
            rows = audit_recursion(F)
            rec.verdicts["lemma4"] = all(r.holds for r in rows if r.verified)
        if F.t >= 3:
            _penultimate_verdict(F, rec, cfg.precision)


def _penultimate_verdict(F, rec, precision):
    try:
        form = r_penultimate_form(F)
        G = form.as_fewnomial()
        if G.is_zero():
            return
        rc = count_roots_unit_interval(G, precision=precision)
    except (InconclusiveBox, ZeroFunction, PrecisionExhausted):
        return
    if rc.certified:
        rec.bounds["theorem2"] = form.theorem2_bound()
        rec.verdicts["theorem2"] = rc.count <= form.theorem2_bound()


def _verify_theorem2(cfg, rec, seed):
    from .dessin.audit import verify_thm2

    P, Q, alpha, beta = random_thm2(cfg, seed)
    rec.instance = {"P": _fracs(P.coeffs), "Q": _fracs(Q.coeffs), "alpha": str(alpha), "beta": str(beta)}
    result = verify_thm2(P, Q, alpha, beta, precision=cfg.precision)
    rec.count, rec.rigor = result.count, result.rigor
    rec.bounds["theorem2"] = result.bound
    if result.holds is None:
        rec.status = "inconclusive"
    else:
        rec.verdicts["theorem2"] = result.holds


def independent_prefixes(F):
    """True when every Wronskian ``W(f_1, ..., f_j)`` is nonzero, i.e. the
    terms are linearly independent in every prefix."""
    terms = list(F.terms)
    return all(not wronskian_factorized(terms[:j]).is_zero() for j in range(2, len(terms) + 1))


def random_independent_fewnomial(cfg, seed):
    """``random_fewnomial`` redrawn (seed, seed + 1, ...) until the terms are
    linearly independent; dependent families such as 1, x, 1 - x have a
    vanishing Wronskian."""
    while True:
        F = random_fewnomial(cfg, seed)
        if F.t >= 2 and independent_prefixes(F):
            return F
        seed = (seed + 1) & _MASK64


def _verify_lemma4(cfg, rec, seed):
    cfg = replace(cfg, integer_exponents=True)
    F = random_independent_fewnomial(cfg, seed)
    rec.instance = F.to_json()
    rows = audit_recursion(F, method="exact")
    rec.detail = json.dumps([r.to_json() for r in rows])
    if not all(r.verified for r in rows):
        rec.status = "inconclusive"
    rec.verdicts["lemma4"] = all(r.holds for r in rows if r.verified)


def random_oracle_fewnomial(cfg, seed):
    """Integer-exponent fewnomial; every other draw has one to four simple
    roots planted in (0, 1) so the comparison sees several roots."""
    cfg = replace(cfg, integer_exponents=True)
    rng = random.Random(seed)
    if rng.random() < 0.5:
        return random_fewnomial(cfg, seed)
    roots = set()
    for _ in range(rng.randint(1, 4)):
        den = rng.randint(2, 9)
        roots.add(Fraction(rng.randint(1, den - 1), den))
    poly = random_polynomial(rng, 2, cfg.coefficient_range)
    for r in roots:
        poly = poly * Polynomial((-r.numerator, r.denominator))
    return FewnomialFunction.from_polynomial(poly, rng.randint(0, 3), rng.randint(0, 3))


def _verify_oracle(cfg, rec, seed):
    F = random_oracle_fewnomial(cfg, seed)
    rec.instance = F.to_json()
    poly = F.to_polynomial()
    oracle = sturm_count(poly, 0, 1)
    rc = count_roots_unit_interval(F, method="interval", precision=cfg.precision)
    rec.count, rec.rigor = rc.count, rc.rigor
    rec.bounds["sturm"] = oracle
    # a heuristic count is compared too but cannot fail the run
    rec.verdicts["oracle"] = rc.count == oracle
    if not rc.certified:
        rec.status = "inconclusive"


def _verify_dessin(cfg, rec, seed):
    from .dessin.audit import check_invariants
    from .dessin.trace import trace_dessin

    fmap = random_rational_map(cfg, seed)
    rec.instance = fmap.to_json()
    d = trace_dessin(fmap)
    rec.detail = f"precision {d.precision}"
    if not d.complete:
        rec.status = "inconclusive"
        rec.detail += "; " + "; ".join(d.failures[:3])
        return
    inv = check_invariants(d)
    rec.verdicts = {k: v for k, v in inv.to_json().items() if isinstance(v, bool) and k != "ok"}
    if not inv.ok:
        rec.detail += "; " + "; ".join(inv.details)


def _verify_proposition(cfg, rec, seed):
    from .dessin.audit import proposition_audit
    from .dessin.trace import trace_dessin

    phi = random_phi(cfg, seed)
    rec.instance = phi.to_json()
    d = trace_dessin(phi.rational_map())
    if not d.complete:
        rec.status = "inconclusive"
        rec.detail = "; ".join(d.failures[:3])
        return
    try:
        audit = proposition_audit(d, (0, 1), phi)
    except HypothesisUnmet as exc:
        rec.status = "inconclusive"
        rec.detail = str(exc)
        return
    rec.count = audit.r_count
    rec.bounds = {"s_minus_one": audit.s_count - 1, "degree_bound": audit.s_degree_bound}
    rec.verdicts["proposition"] = audit.inequality_holds
    if audit.sturm_agrees is not None:
        rec.verdicts["sturm"] = audit.sturm_agrees


_VERIFIERS = {
    "theorem1": _verify_theorem1,
    "theorem2": _verify_theorem2,
    "lemma4": _verify_lemma4,
    "oracle": _verify_oracle,
    "dessin": _verify_dessin,
    "proposition": _verify_proposition,
}


def verify_instance(cfg, index):
    """Generate and check instance ``index``; never raises on numerical trouble."""
    seed = instance_seed(cfg.seed, index)
    rec = InstanceRecord(cfg.mode, index, seed, {})
    start = time.perf_counter()
    try:
        _VERIFIERS[cfg.mode](cfg, rec, seed)
    except (InconclusiveBox, PrecisionExhausted) as exc:
        rec.status = "inconclusive"
        rec.detail = f"{type(exc).__name__}: {exc}"
    except (DegenerateInput, FewnomialError) as exc:
        rec.status = "inconclusive"
        rec.detail = f"{type(exc).__name__}: {exc}"
    if rec.status == "pass" and not all(rec.verdicts.values()):
        rec.status = "violation"
    rec.wall_time = time.perf_counter() - start
    return rec


@dataclass
class BatchSummary:
    total: int
    passed: int
    violations: int
    inconclusive: int
    max_count: int | None
    records: list
    aborted: bool = False

    @property
    def certified_fraction(self):
        return (self.total - self.inconclusive) / self.total if self.total else 0.0

    def to_json(self):
        return {
            "total": self.total,
            "passed": self.passed,
            "violations": self.violations,
            "inconclusive": self.inconclusive,
            "certified_fraction": self.certified_fraction,
            "max_count": self.max_count,
            "aborted": self.aborted,
            "schema": SCHEMA_VERSION,
        }


def _write_reproducer(cfg, rec):
    path = Path(cfg.reproducer or (f"{cfg.out}.reproducer.json" if cfg.out else "reproducer.json"))
    path.write_text(json.dumps({"config": cfg.to_json(), "record": rec.to_json()}, indent=2) + "\n")
    log.error("violation at index %d (seed %d); reproducer in %s", rec.index, rec.seed, path)


def _records(cfg):
    if cfg.workers <= 1:
        for i in range(cfg.count):
            yield verify_instance(cfg, i)
        return
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        yield from pool.map(verify_instance, [cfg] * cfg.count, range(cfg.count), chunksize=4)


def verify_batch(cfg):
    """Verify ``cfg.count`` instances; appends JSONL to ``cfg.out`` and stops
    at the first violation after writing a reproducer file."""
    cfg.validate()
    sink = open(cfg.out, "a") if cfg.out else None
    records = []
    aborted = False
    try:
        for rec in _records(cfg):
            records.append(rec)
            if sink:
                sink.write(json.dumps(rec.to_json()) + "\n")
                sink.flush()
            if rec.status == "violation":
                _write_reproducer(cfg, rec)
                aborted = True
                break
    finally:
        if sink:
            sink.close()
    counts = [r.count for r in records if r.count is not None and r.status != "inconclusive"]
    return BatchSummary(
        total=len(records),
        passed=sum(r.status == "pass" for r in records),
        violations=sum(r.status == "violation" for r in records),
        inconclusive=sum(r.status == "inconclusive" for r in records),
        max_count=max(counts, default=None),
        records=records,
        aborted=aborted,
    )


# ---------------------------------------------------------------------------
# search


def _mutate(system, rng, cfg):
    f, g = list(system.f_terms), list(system.g_terms)
    which = rng.randrange(len(f) + 3)
    terms, k = (f, which) if which < len(f) else (g, which - len(f))
    c, a, b = terms[k]
    move = rng.randrange(3)
    if move == 0:
        factor = Fraction(rng.choice((1, 2, 3, 5)), rng.choice((1, 2, 3, 5)))
        c = c * factor if rng.random() < 0.5 else -c if terms is f else c / factor
    elif move == 1:
        a = _exponent(rng, cfg)
    else:
        b = _exponent(rng, cfg)
    terms[k] = (c, a, b)
    return BivariateSparseSystem(f, g)


def _score(system, precision):
    try:
        result = count_positive_solutions(system, precision=precision)
    except NoPositiveSolutions:
        return 0
    except (FewnomialError, ValueError, ZeroDivisionError):
        return None
    return result.count if result.rigor == "certified" else None


def search_maximizer(cfg, budget):
    """Hill climbing over coefficients and exponents maximizing the certified
    count of positive solutions.  Returns the best record found; a high count
    is evidence, not a proof of sharpness."""
    cfg.validate()
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = random.Random(instance_seed(cfg.seed, -1))
    start = time.perf_counter()
    best_seed = instance_seed(cfg.seed, 0)
    best = random_system(cfg, best_seed)
    best_score = _score(best, cfg.precision)
    evaluations = 1
    restarts = 0
    stale = 0
    current, current_score = best, best_score
    while evaluations < budget:
        if stale > 200:
            restarts += 1
            current = random_system(cfg, instance_seed(cfg.seed, restarts))
            current_score = _score(current, cfg.precision)
            evaluations += 1
            stale = 0
            continue
        try:
            candidate = _mutate(current, rng, cfg)
            if detect_collinear(candidate.g_terms):
                raise DegenerateInput("collinear")
        except (DegenerateInput, ValueError):
            stale += 1
            continue
        score = _score(candidate, cfg.precision)
        evaluations += 1
        if score is not None and (current_score is None or score >= current_score):
            stale = 0 if current_score is None or score > current_score else stale + 1
            current, current_score = candidate, score
            if best_score is None or score > best_score:
                best, best_score = candidate, score
        else:
            stale += 1
    rec = InstanceRecord("search", 0, best_seed, best.to_json(), best_score, "certified")
    rec.bounds["new"] = new_bound(best.t) if best.t >= 3 else None
    rec.detail = f"{evaluations} evaluations, {restarts} restarts"
    rec.wall_time = time.perf_counter() - start
    return rec


def default_precision():
    return int(os.environ.get("FEWNOMIALS_PRECISION", "64"))
