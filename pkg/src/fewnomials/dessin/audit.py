"""Combinatorial checks on traced dessins and the root-count inequality
``#R_J <= #S - 1`` for the real dessin of ``x^a (1-x)^b P^m / Q^m``."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpc

from ..bounds import thm2_bound
from ..errors import DegenerateInput, HypothesisUnmet
from ..exact import sturm_count
from ..fewnomial import FewnomialFunction, FewnomialTerm, count_roots_unit_interval

_NEXT = {1: {"p": "q", "q": "r", "r": "p"}, -1: {"p": "r", "r": "q", "q": "p"}}


@dataclass
class FaceReport:
    face: int
    counts: tuple
    direction: int | None
    ok: bool

    def to_json(self):
        return {"face": self.face, "counts": list(self.counts), "direction": self.direction, "ok": self.ok}


def check_cycle_rule(d):
    """Per face: equal nonzero numbers of p, q and r read in cyclic order.

    Darts of a face all run the same way along the edge orientation; read
    forwards the letters cycle p, q, r and read backwards p, r, q.  Nodes
    carry no letter and are skipped.
    """
    reports = []
    for idx, face in enumerate(d.faces):
        directions = {direction for _, direction in face}
        letters = [d.vertices[d.dart_vertices(dart)[0]].label for dart in face]
        letters = [s for s in letters if s != "node"]
        counts = tuple(letters.count(s) for s in "pqr")
        ok = len(directions) == 1 and counts[0] > 0 and len(set(counts)) == 1
        direction = directions.pop() if len(directions) == 1 else None
        if ok:
            step = _NEXT[direction]
            ok = all(step[a] == b for a, b in zip(letters, letters[1:] + letters[:1]))
        reports.append(FaceReport(idx, counts, direction, ok))
    return reports


@dataclass
class InvariantReport:
    euler: bool
    conjugation: bool
    preimages: bool
    valency_law: bool
    cycle_rule: bool
    details: list = field(default_factory=list)

    @property
    def ok(self):
        return self.euler and self.conjugation and self.preimages and self.valency_law and self.cycle_rule

    def to_json(self):
        out = {k: getattr(self, k) for k in ("euler", "conjugation", "preimages", "valency_law", "cycle_rule")}
        out["ok"] = self.ok
        out["details"] = list(self.details)
        return out


def _merge_tol(d):
    return Fraction(1, 2 ** (d.precision // 2))


def _hp(v):
    return v.position_hp if v.position_hp is not None else mpc(v.position)


def _conjugate_map(d):
    """Index of the conjugate of each vertex, or None when none matches."""
    tol = _merge_tol(d)
    out = {}
    with mp.workprec(max(d.precision, 53)):
        for i, v in enumerate(d.vertices):
            if v.at_infinity:
                out[i] = i
                continue
            z = _hp(v)
            best = None
            for j, w in enumerate(d.vertices):
                if w.at_infinity or w.label != v.label or w.valency != v.valency:
                    continue
                if abs(_hp(w) - z.conjugate()) <= tol * (1 + abs(z)):
                    best = j
                    break
            out[i] = best
    return out


def connected_components(d):
    """Vertex index sets of the connected components of the graph."""
    parent = list(range(len(d.vertices)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in d.edges:
        parent[find(e.start)] = find(e.end)
    groups = {}
    for i in range(len(d.vertices)):
        groups.setdefault(find(i), set()).add(i)
    return sorted(groups.values(), key=min)


def component_euler_characteristics(d):
    """``V - E + F`` of each component with its own boundary walks.

    Equal to 2 on every component exactly when the rotation system is
    planar.  When the graph is disconnected (possible once non-real critical
    values put a branch point inside a face) the global sum is ``2C``.
    """
    out = []
    for comp in connected_components(d):
        v = len(comp)
        e = sum(1 for edge in d.edges if edge.start in comp)
        f = sum(1 for face in d.faces if d.dart_vertices(face[0])[0] in comp)
        out.append(v - e + f)
    return out


def check_invariants(d):
    """Euler formula, conjugation symmetry, preimage counts, valency law and
    the cycle rule, evaluated on a traced dessin."""
    details = []
    per_component = component_euler_characteristics(d)
    euler = all(chi == 2 for chi in per_component)
    if not euler:
        details.append(f"V - E + F per component = {per_component}")

    conj = _conjugate_map(d)
    conjugation = all(j is not None for j in conj.values())
    if conjugation:
        edges = Counter((e.start, e.end) for e in d.edges)
        mirrored = Counter((conj[e.start], conj[e.end]) for e in d.edges)
        conjugation = edges == mirrored
    if not conjugation:
        details.append("vertex or edge set not closed under conjugation")

    preimages = True
    for label in "pqr":
        total = sum(v.multiplicity for v in d.vertices if v.label == label)
        if total != d.degree:
            preimages = False
            details.append(f"{label}: multiplicities sum to {total}, degree {d.degree}")

    valency_law = True
    for i, v in enumerate(d.vertices):
        if v.valency != 2 * v.multiplicity:
            valency_law = False
            details.append(f"vertex {i}: valency {v.valency}, multiplicity {v.multiplicity}")

    faces = check_cycle_rule(d)
    cycle_rule = bool(faces) and all(f.ok for f in faces)
    if not cycle_rule:
        details.append("faces violating the cycle rule: " + str([f.face for f in faces if not f.ok]))
    return InvariantReport(euler, conjugation, preimages, valency_law, cycle_rule, details)


# ---------------------------------------------------------------------------
# simple dessins and the proposition


def _in_interval(v, J):
    if not v.is_real or v.at_infinity:
        return False
    lo, hi = J
    x = v.position.real
    return float(lo) < x < float(hi)


@dataclass
class SimplicityReport:
    four_valent_nodes: bool
    real_nodes_have_neighbors: bool
    equal_special_valency: bool
    m: int | None

    @property
    def simple(self):
        return self.four_valent_nodes and self.real_nodes_have_neighbors and self.equal_special_valency

    def to_json(self):
        return {
            "i": self.four_valent_nodes,
            "ii": self.real_nodes_have_neighbors,
            "iii": self.equal_special_valency,
            "m": self.m,
            "simple": self.simple,
        }


def _real_neighbors(d, i):
    """Real vertices other than ``i`` reached from ``i`` along a branch of
    the dessin off the real line (non-real edges through non-real vertices)."""
    adjacency = {}
    for e in d.edges:
        if not e.is_real:
            adjacency.setdefault(e.start, []).append(e.end)
            adjacency.setdefault(e.end, []).append(e.start)
    found, seen, stack = set(), {i}, [i]
    while stack:
        for j in adjacency.get(stack.pop(), []):
            if j in seen:
                continue
            seen.add(j)
            if d.vertices[j].is_real:
                found.add(j)
            else:
                stack.append(j)
    found.discard(i)
    return found


def check_simple(d, J=(0, 1)):
    """The three conditions of a simple dessin relative to ``J``.

    (i) every non-special vertex of valency at least four has valency four
    and is not an r-vertex; (ii) every real such vertex is joined to another
    real vertex by a branch off the real line; (iii) the special vertices that are
    non-real or lie in ``J`` share one valency ``2m``.
    """
    nodes = [i for i, v in enumerate(d.vertices) if not v.is_special and v.valency >= 4]
    cond_i = all(d.vertices[i].valency == 4 and d.vertices[i].label != "r" for i in nodes)

    cond_ii = all(_real_neighbors(d, i) for i in nodes if d.vertices[i].is_real)

    special = [v for v in d.vertices if v.is_special]
    relevant = [v for v in special if not v.is_real or _in_interval(v, J)]
    valencies = {v.valency for v in relevant}
    cond_iii = len(valencies) <= 1
    if valencies:
        m = valencies.pop() // 2 if cond_iii else None
    else:
        m = min((v.valency // 2 for v in special), default=None)
    return SimplicityReport(cond_i, cond_ii, cond_iii, m)


@dataclass
class PropositionAudit:
    J: tuple
    r_count: int
    s_count: int
    inequality_holds: bool
    simplicity: SimplicityReport
    sturm_count: int | None = None
    sturm_agrees: bool | None = None
    s_degree_bound: int | None = None

    def to_json(self):
        return {
            "J": [str(Fraction(c)) for c in self.J],
            "r_count": self.r_count,
            "s_count": self.s_count,
            "inequality_holds": self.inequality_holds,
            "simplicity": self.simplicity.to_json(),
            "sturm_count": self.sturm_count,
            "sturm_agrees": self.sturm_agrees,
            "s_degree_bound": self.s_degree_bound,
        }


def proposition_audit(d, J=(0, 1), phi=None):
    """Count r-vertices in ``J`` against the special vertices.

    Refuses (HypothesisUnmet) when a special vertex in ``J`` has valency
    divisible by four, or when ``phi`` is given without odd ``a``, ``b``
    and ``m``.  For polynomial ``phi`` the r-count is cross-checked
    against an exact Sturm count of ``N - D`` on ``J``.
    """
    if phi is not None and not phi.satisfies_parity:
        raise HypothesisUnmet("a, b and m must all be odd")
    for v in d.vertices:
        if v.is_special and _in_interval(v, J) and v.valency % 4 == 0:
            raise HypothesisUnmet(f"special vertex at {v.position.real:.6g} has valency {v.valency}")
    r_count = sum(1 for v in d.vertices if v.label == "r" and _in_interval(v, J))
    s_count = sum(1 for v in d.vertices if v.is_special)
    audit = PropositionAudit(tuple(J), r_count, s_count, r_count <= s_count - 1, check_simple(d, J))
    fmap = d.rational_map
    if fmap is not None and (phi is None or phi.polynomial_case):
        lo, hi = (Fraction(c) for c in J)
        audit.sturm_count = sturm_count(fmap.N - fmap.D, lo, hi)
        audit.sturm_agrees = audit.sturm_count == r_count
    if phi is not None:
        audit.s_degree_bound = phi.P.degree + phi.Q.degree + 3
    return audit


# ---------------------------------------------------------------------------
# the two-polynomial bound


@dataclass
class Thm2Result:
    count: int
    bound: int
    holds: bool | None
    rigor: str

    def to_json(self):
        return dict(self.__dict__)


def thm2_fewnomial(P, Q, alpha, beta):
    """``x^alpha (1-x)^beta P(x) - Q(x)`` as a fewnomial."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    terms = [FewnomialTerm(c, alpha + i, beta) for i, c in enumerate(P.coeffs) if c]
    terms += [FewnomialTerm(-c, Fraction(j), Fraction(0)) for j, c in enumerate(Q.coeffs) if c]
    return FewnomialFunction(terms)


def verify_thm2(P, Q, alpha, beta, method="auto", precision=64):
    """Roots in ``(0, 1)`` of ``x^alpha (1-x)^beta P - Q`` against
    ``deg P + deg Q + 2``.  ``holds`` is None for a heuristic count."""
    if P.is_zero() or Q.is_zero():
        raise DegenerateInput("P and Q must be nonzero")
    F = thm2_fewnomial(P, Q, alpha, beta)
    if F.is_zero():
        raise DegenerateInput("x^alpha (1-x)^beta P - Q vanishes identically")
    rc = count_roots_unit_interval(F, method=method, precision=precision)
    bound = thm2_bound(P.degree, Q.degree)
    holds = rc.count <= bound if rc.certified else None
    return Thm2Result(rc.count, bound, holds, rc.rigor)


__all__ = [
    "FaceReport",
    "InvariantReport",
    "PropositionAudit",
    "SimplicityReport",
    "Thm2Result",
    "check_cycle_rule",
    "component_euler_characteristics",
    "connected_components",
    "check_invariants",
    "check_simple",
    "proposition_audit",
    "thm2_fewnomial",
    "verify_thm2",
]
