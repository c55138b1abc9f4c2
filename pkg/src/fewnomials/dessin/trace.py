"""Numerical construction of the real dessin ``phi^-1(RP^1)``.

Vertices are the preimages of the marked values (0, 1, oo and the real
critical values), computed at high precision with exact multiplicities.
Edges are followed by predictor-corrector continuation of the roots of
``cos(t) N(z) - sin(t) D(z)`` as ``t`` sweeps each arc between consecutive
marked values.  The rotation system comes from the local normal form
``phi - s ~ c (z - v)^e`` at every vertex.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp

from ..errors import TraceFailure
from ..exact import Polynomial, sturm_count
from .phi import PhiSpec, RationalMap

PRECISION_LADDER = (128, 256, 512, 1024, 2048)
LABELS = ("p", "q", "r", "node")
_SIDE_ABOVE, _SIDE_BELOW = 1, -1


@dataclass
class DessinVertex:
    position: complex | None
    label: str
    valency: int
    is_real: bool
    multiplicity: int
    value: float
    at_infinity: bool = False
    critical_multiplicity: int = 0
    position_hp: object = field(default=None, repr=False, compare=False)

    @property
    def is_special(self):
        return self.label in ("p", "q")

    def to_json(self):
        pos = None if self.at_infinity else [self.position.real, self.position.imag]
        return {
            "position": pos,
            "infinity": self.at_infinity,
            "label": self.label,
            "valency": self.valency,
            "real": self.is_real,
            "special": self.is_special,
        }


@dataclass
class DessinEdge:
    start: int
    end: int
    points: list
    is_real: bool
    partial: bool = False


@dataclass
class Dessin:
    vertices: list
    edges: list
    rotation: dict
    faces: list
    degree: int
    partial: bool = False
    failures: list = field(default_factory=list)
    precision: int = 128
    critical_points: list = field(default_factory=list)
    rational_map: RationalMap | None = None
    partial_paths: list = field(default_factory=list)

    @property
    def complete(self):
        return not self.partial

    def __repr__(self):
        return (
            f"Dessin(degree={self.degree}, vertices={len(self.vertices)}, "
            f"edges={len(self.edges)}, faces={len(self.faces)}, complete={self.complete})"
        )

    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def darts_at(self, v):
        return self.rotation.get(v, [])

    def dart_vertices(self, dart):
        e, direction = dart
        edge = self.edges[e]
        return (edge.start, edge.end) if direction > 0 else (edge.end, edge.start)


# ---------------------------------------------------------------------------
# high-precision vertex computation


def _mp_coeffs(poly):
    return [mpmath.mpf(c.numerator) / c.denominator for c in poly.coeffs]


def _polyval(coeffs, z):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _taylor(coeffs, v, k):
    """k-th Taylor coefficient of the polynomial at ``v``."""
    total = 0
    for i in range(k, len(coeffs)):
        total += coeffs[i] * mpmath.binomial(i, k) * v ** (i - k)
    return total


def _roots(poly, prec):
    """Roots of an exact squarefree polynomial, with real roots made exact reals."""
    if poly.degree < 1:
        return []
    p = poly.primitive()
    if p.degree == 1:
        return [mpmath.mpc(-mpmath.mpf(p.coeffs[0].numerator) / p.coeffs[0].denominator * p.coeffs[1].denominator / p.coeffs[1].numerator)]
    coeffs = list(reversed(_mp_coeffs(p)))
    roots = mpmath.polyroots(coeffs, maxsteps=max(200, 20 * p.degree), extraprec=2 * prec)
    bound = p.root_bound()
    n_real = sturm_count(p, -bound, bound)
    roots = sorted((mpmath.mpc(r) for r in roots), key=lambda r: abs(r.imag))
    out = [mpmath.mpc(r.real, 0) for r in roots[:n_real]]
    out += roots[n_real:]
    return out


def _numeric_roots(coeffs, prec, rel_tol=0):
    """Roots of a polynomial with mp coefficients (low degree first).

    Leading coefficients below ``rel_tol`` times the largest one are treated
    as zero, i.e. as roots at infinity.
    """
    scale = max((abs(c) for c in coeffs), default=0)
    while coeffs and abs(coeffs[-1]) <= rel_tol * scale:
        coeffs = coeffs[:-1]
    if len(coeffs) <= 1:
        return []
    if len(coeffs) == 2:
        return [mpmath.mpc(-coeffs[0] / coeffs[1])]
    return [mpmath.mpc(r) for r in mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=2 * prec)]


def _deflate(coeffs, root, times):
    for _ in range(times):
        out = [0] * (len(coeffs) - 1)
        acc = 0
        for i in range(len(coeffs) - 1, 0, -1):
            acc = acc * root + coeffs[i]
            out[i - 1] = acc
        coeffs = out
    return coeffs


@dataclass
class _Preimage:
    z: object  # mpc, or None for infinity
    e: int
    value_index: int
    crit: int = 0


@dataclass
class _Marked:
    theta: object  # mpf in (-pi/2, pi/2]
    kind: str  # "zero", "one", "inf" or "crit"
    value: object  # mpf, or None for infinity


def _chordal(z1, z2):
    if z1 is None and z2 is None:
        return 0.0
    if z1 is None:
        return 1 / abs(mpmath.sqrt(1 + abs(z2) ** 2))
    if z2 is None:
        return 1 / abs(mpmath.sqrt(1 + abs(z1) ** 2))
    return abs(z1 - z2) / mpmath.sqrt((1 + abs(z1) ** 2) * (1 + abs(z2) ** 2))


class _Vertices:
    """Preimages of every marked value, with exact multiplicities."""

    def __init__(self, fmap, prec):
        self.fmap = fmap
        self.prec = prec
        N, D = fmap.N, fmap.D
        d = fmap.degree
        self.d = d
        self.Nc, self.Dc = _mp_coeffs(N), _mp_coeffs(D)
        self.Nr = list(reversed(self.Nc + [mpmath.mpf(0)] * (d + 1 - len(self.Nc))))
        self.Dr = list(reversed(self.Dc + [mpmath.mpf(0)] * (d + 1 - len(self.Dc))))
        tol = mpmath.mpf(2) ** (-prec // 2)
        self.tol = tol

        # critical points: exact multiplicities from the squarefree decomposition
        W = fmap.critical_polynomial()
        self.critical = []  # (z, mu, kind)
        nodes = []
        for factor, mu in W.squarefree_decomposition():
            parts = {}
            rest = factor
            for kind, target in (("zero", N), ("inf", D), ("one", N - D)):
                g = rest.gcd(target)
                if g.degree > 0:
                    parts[kind] = g
                    rest = rest.exact_div(g)
            for kind, g in parts.items():
                for z in _roots(g, prec):
                    self.critical.append((z, mu, kind))
            for z in _roots(rest, prec):
                value = _polyval(self.Nc, z) / _polyval(self.Dc, z)
                self.critical.append((z, mu, "crit"))
                if abs(value.imag) <= tol * (1 + abs(value)):
                    nodes.append((z, mu, value.real))
        e_inf = fmap.local_degree_at_infinity()
        c_inf = fmap.value_at_infinity()
        if e_inf >= 2:
            self.critical.append((None, e_inf - 1, "inf-point"))
            if c_inf is not None and c_inf not in (0, 1):
                nodes.append((None, e_inf - 1, mpmath.mpf(c_inf.numerator) / c_inf.denominator))

        # marked values on RP^1, sorted by theta = atan(s)
        marked = [
            _Marked(mpmath.mpf(0), "zero", mpmath.mpf(0)),
            _Marked(mpmath.pi / 4, "one", mpmath.mpf(1)),
            _Marked(mpmath.pi / 2, "inf", None),
        ]
        node_groups = []
        for z, mu, s in nodes:
            for group in node_groups:
                if abs(group[0] - s) <= tol * (1 + abs(s)):
                    group[1].append((z, mu))
                    break
            else:
                node_groups.append([s, [(z, mu)]])
        for s, members in node_groups:
            marked.append(_Marked(mpmath.atan(s), "crit", s))
        marked.sort(key=lambda m: m.theta)
        self.marked = marked

        # preimages of each marked value
        self.preimages = []
        for idx, mk in enumerate(marked):
            if mk.kind == "zero":
                pts = self._exact_preimages(N, idx)
            elif mk.kind == "one":
                pts = self._exact_preimages(N - D, idx)
            elif mk.kind == "inf":
                pts = self._exact_preimages(D, idx)
            else:
                members = next(g[1] for g in node_groups if g[0] is mk.value)
                pts = self._critical_preimages(mk.value, members, idx)
            total = sum(p.e for p in pts)
            if total != d:
                raise TraceFailure(f"preimage count {total} != degree {d} for marked value {idx}")
            self.preimages.append(pts)

        self.points = [p for group in self.preimages for p in group]
        self._local_coefficients()
        self._capture_radii()

    def _exact_preimages(self, poly, idx):
        pts = []
        for factor, mult in poly.squarefree_decomposition():
            for z in _roots(factor, self.prec):
                pts.append(_Preimage(z, mult, idx, mult - 1))
        if poly.degree < self.d:
            pts.append(_Preimage(None, self.d - max(poly.degree, 0), idx, self.d - max(poly.degree, 0) - 1))
        return pts

    def _critical_preimages(self, s, members, idx):
        pts = []
        coeffs = [n - s * dd for n, dd in zip(_pad(self.Nc, self.d), _pad(self.Dc, self.d))]
        for z, mu in members:
            pts.append(_Preimage(z, mu + 1, idx, mu))
            if z is not None:
                coeffs = _deflate(coeffs, z, mu + 1)
        # remaining preimages are simple
        for z in _numeric_roots(coeffs, self.prec, self.tol):
            pts.append(_Preimage(z, 1, idx, 0))
        # a simple preimage at infinity shows up as a degree drop
        finite = sum(p.e for p in pts if p.z is not None)
        at_inf = sum(p.e for p in pts if p.z is None)
        if finite + at_inf < self.d:
            pts.append(_Preimage(None, self.d - finite - at_inf, idx, 0))
        return pts

    def _local_coefficients(self):
        """``c`` with ``phi - s ~ c (z - v)^e`` (``1/phi ~ c (z - v)^e`` for poles)."""
        for p in self.points:
            mk = self.marked[p.value_index]
            if p.z is None:
                num, den, at = self.Nr, self.Dr, mpmath.mpf(0)
            else:
                num, den, at = self.Nc, self.Dc, p.z
            if mk.kind == "inf":
                top, bottom = den, num
            else:
                s = mk.value
                top = [a - s * b for a, b in zip(_pad(num, self.d), _pad(den, self.d))]
                bottom = den
            p.c = _taylor(top, at, p.e) / _polyval(bottom, at)

    def _capture_radii(self):
        others = [z for z, _, _ in self.critical] + [p.z for p in self.points]
        for p in self.points:
            best = mpmath.mpf(1)
            # the normal form is taken in the chart of p, so stay clear of oo
            extra = [None] if p.z is not None else []
            for z in others + extra:
                dist = _chordal(p.z, z)
                # the same point computed from another factor
                if dist <= self.tol:
                    continue
                best = min(best, dist)
            p.radius = float(best) / 8


def _pad(coeffs, d):
    return list(coeffs) + [mpmath.mpf(0)] * (d + 1 - len(coeffs))


# ---------------------------------------------------------------------------
# continuation


class _Tracker:
    """Follow a root of ``cos(t) N - sin(t) D`` in ``t`` on the sphere.

    Works in the chart ``z`` while ``|z| <= 2`` and in ``w = 1/z`` beyond.
    ``mode`` is ``"float"`` (Python complex numbers) or an mpmath precision.
    """

    def __init__(self, verts, prec=None):
        self.verts = verts
        self.prec = prec
        if prec is None:
            conv = float
            self.cos, self.sin = math.cos, math.sin
            self.eps = 1e-13
        else:
            conv = mpmath.mpf
            self.cos, self.sin = mpmath.cos, mpmath.sin
            self.eps = mpmath.mpf(2) ** (-prec + 10)
        self.num = [[conv(c) for c in _pad(verts.Nc, verts.d)], [conv(c) for c in verts.Nr]]
        self.den = [[conv(c) for c in _pad(verts.Dc, verts.d)], [conv(c) for c in verts.Dr]]
        self.dnum = [_deriv(cs) for cs in self.num]
        self.dden = [_deriv(cs) for cs in self.den]
        self.anum = [[abs(c) for c in cs] for cs in self.num]
        self.aden = [[abs(c) for c in cs] for cs in self.den]
        self.unit = (2.0**-52 if prec is None else mpmath.mpf(2) ** -prec) * 4 * (verts.d + 1)
        self.ce = self.se = None

    def _g(self, chart, zeta, delta):
        """``g``, ``dg/dz``, ``dg/d delta`` and the rounding noise of the root.

        The angle is ``theta_end - delta``, expanded so that small ``delta``
        keeps its relative precision.
        """
        cd, sd = self.cos(delta), self.sin(delta)
        c = self.ce * cd + self.se * sd
        s = self.se * cd - self.ce * sd
        n = _polyval(self.num[chart], zeta)
        dn = _polyval(self.den[chart], zeta)
        g = c * n - s * dn
        gz = c * _polyval(self.dnum[chart], zeta) - s * _polyval(self.dden[chart], zeta)
        g_delta = s * n + c * dn
        r = abs(zeta)
        bound = abs(c) * _polyval(self.anum[chart], r) + abs(s) * _polyval(self.aden[chart], r)
        noise = self.unit * bound / abs(gz) if gz != 0 else None
        return g, gz, g_delta, noise

    def _newton(self, chart, zeta, delta):
        for _ in range(8):
            g, gz, _, noise = self._g(chart, zeta, delta)
            if gz == 0:
                return None, None
            step = g / gz
            zeta = zeta - step
            if abs(step) <= max(self.eps * (1 + abs(zeta)), 4 * noise):
                return zeta, noise
        return None, None

    def track(self, z0, theta0, theta_end, targets):
        """Return ``(preimage, local coordinate, path)``; raise TraceFailure."""
        to_num = complex if self.prec is None else mpmath.mpc
        conv = float if self.prec is None else (lambda v: v)
        z0 = to_num(z0)
        self.ce, self.se = conv(mpmath.cos(theta_end)), conv(mpmath.sin(theta_end))
        delta = conv(theta_end - theta0)
        chart, zeta = (0, z0) if abs(z0) <= 1 else (1, 1 / z0)
        span = delta
        h = -span / 16
        path = [_point(chart, zeta)]
        min_h = abs(span) * (1e-15 if self.prec is None else mpmath.mpf(2) ** (-self.prec // 2))
        for _ in range(20000):
            hit = self._captured(chart, zeta, targets)
            if hit is not None:
                return hit[0], hit[1], path
            if abs(h) > abs(delta) / 2:
                h = -delta / 2
            if abs(h) < min_h * min(1, abs(delta) / abs(span) * 1e6):
                raise TraceFailure("step size underflow", path)
            _, gz, g_delta, _ = self._g(chart, zeta, delta)
            if gz == 0:
                raise TraceFailure("singular Jacobian", path)
            slope = -g_delta / gz
            pred = zeta + h * slope
            corr, noise = self._newton(chart, pred, delta + h)
            slack = max(self.eps * (1 + abs(pred)), 8 * noise) if corr is not None else 0
            if corr is None or abs(corr - pred) > 0.3 * abs(h * slope) + slack:
                h = h / 2
                continue
            zeta, delta = corr, delta + h
            if abs(zeta) > 2:
                chart, zeta = 1 - chart, 1 / zeta
            path.append(_point(chart, zeta))
            h = h * 1.6
        raise TraceFailure("step budget exhausted", path)

    def _captured(self, chart, zeta, targets):
        for p in targets:
            if p.z is None:
                if chart == 1:
                    dist = abs(zeta) / abs(_sqrt(1 + abs(zeta) ** 2))
                else:
                    dist = 1 / abs(_sqrt(1 + abs(zeta) ** 2))
                if dist < p.radius:
                    local = zeta if chart == 1 else 1 / zeta
                    return p, local
            else:
                z = zeta if chart == 0 else (1 / zeta if zeta != 0 else None)
                if z is None:
                    continue
                v = complex(p.z) if self.prec is None else p.z
                dist = abs(z - v) / abs(_sqrt((1 + abs(z) ** 2) * (1 + abs(v) ** 2)))
                if dist < p.radius:
                    return p, z - v
        return None


def _sqrt(x):
    return cmath.sqrt(x) if isinstance(x, (float, complex, int)) else mpmath.sqrt(x)


def _deriv(cs):
    return [i * c for i, c in enumerate(cs)][1:]


def _point(chart, zeta):
    if chart == 0:
        return complex(zeta)
    if zeta == 0:
        return None
    return complex(1 / zeta)


def _ray_index(p, local):
    """Index ``k`` of the ray ``arg(z - v) = (k pi - arg c) / e``."""
    e = p.e
    ang = float(mpmath.arg(mpmath.mpc(local))) * e + float(mpmath.arg(p.c))
    return round(ang / math.pi) % (2 * e)


# ---------------------------------------------------------------------------
# assembly


def trace_dessin(phi, precision=128, max_precision=2048):
    """Trace ``phi^-1(RP^1)`` for a PhiSpec or RationalMap.

    Tracking runs in double precision first and falls back to mpmath at
    ``precision``, doubling up to ``max_precision``.  When no level
    succeeds the last attempt is returned with ``partial = True``.
    """
    fmap = phi.rational_map() if isinstance(phi, PhiSpec) else phi
    if fmap.degree < 1:
        raise TraceFailure("constant map")
    levels = [None] + [p for p in PRECISION_LADDER if precision <= p <= max_precision]
    if precision not in PRECISION_LADDER and precision <= max_precision:
        levels.insert(1, precision)
    last = None
    for level in levels:
        vprec = max(precision, level or 0)
        with mp.workprec(vprec):
            try:
                verts = _Vertices(fmap, vprec)
            except (TraceFailure, mpmath.libmp.NoConvergence) as exc:
                last = _empty_partial(fmap, vprec, str(exc))
                continue
            dessin = _assemble(fmap, verts, level, vprec)
        dessin.precision = level or 53
        if dessin.complete:
            return dessin
        last = dessin
    return last


def _empty_partial(fmap, prec, message):
    return Dessin([], [], {}, [], fmap.degree, True, [message], prec, [], fmap)


def _assemble(fmap, verts, level, vprec):
    tracker = _Tracker(verts, level)
    marked = verts.marked
    K = len(marked)
    d = verts.d
    failures = []
    arrivals = {id(p): [] for p in verts.points}
    raw_edges = []
    for j in range(K):
        ta = marked[j].theta
        tb = marked[j + 1].theta if j + 1 < K else marked[0].theta + mpmath.pi
        tm = (ta + tb) / 2
        coeffs = [mpmath.cos(tm) * n - mpmath.sin(tm) * dd for n, dd in zip(_pad(verts.Nc, d), _pad(verts.Dc, d))]
        try:
            starts = _numeric_roots(coeffs, vprec)
        except mpmath.libmp.NoConvergence:
            failures.append(f"arc {j}: root finding failed")
            continue
        if len(starts) != d:
            failures.append(f"arc {j}: {len(starts)} roots for degree {d}")
            continue
        for z0 in starts:
            if abs(z0.imag) <= verts.tol * (1 + abs(z0)):
                z0 = mpmath.mpc(z0.real, 0)
            try:
                pb, lb, path_b = tracker.track(z0, tm, tb, verts.preimages[(j + 1) % K])
                pa, la, path_a = tracker.track(z0, tm, ta, verts.preimages[j])
            except TraceFailure as exc:
                failures.append(f"arc {j}: {exc}")
                raw_edges.append((None, None, exc.edge or [complex(z0)], True))
                continue
            idx = len(raw_edges)
            arrivals[id(pb)].append((idx, -1, _SIDE_BELOW, lb))
            arrivals[id(pa)].append((idx, +1, _SIDE_ABOVE, la))
            points = list(reversed(path_b)) + path_a[1:]
            raw_edges.append((pb, pa, points, False))

    # vertex consistency: e arrivals from each side on distinct rays
    rays = {}
    for p in verts.points:
        arr = arrivals[id(p)]
        above = sum(1 for a in arr if a[2] == _SIDE_ABOVE)
        below = len(arr) - above
        ks = [_ray_index(p, a[3]) for a in arr]
        parities = {(a[2], k % 2) for a, k in zip(arr, ks)}
        ok = above == p.e and below == p.e and len(set(ks)) == len(ks)
        ok = ok and len({side for side, _ in parities}) == len(parities)
        if not ok:
            failures.append(f"vertex {_fmt(p.z)}: arrivals {above}/{below} for local degree {p.e}")
        rays[id(p)] = ks

    # vertices after dropping valency-2 pass-through points
    keep = []
    index = {}
    for p in verts.points:
        mk = marked[p.value_index]
        if mk.kind == "crit" and p.e == 1:
            continue
        index[id(p)] = len(keep)
        keep.append(p)
    vertices = [_make_vertex(p, marked[p.value_index], len(arrivals[id(p)])) for p in keep]

    # splice edges through pass-through points
    edges = []
    rotation = {i: [] for i in range(len(vertices))}
    partial = bool(failures)
    used = set()
    by_pass = {}
    for idx, (pb, pa, pts, bad) in enumerate(raw_edges):
        if bad:
            continue
        for p in (pb, pa):
            if id(p) not in index:
                by_pass.setdefault(id(p), []).append(idx)
    for idx, (pb, pa, pts, bad) in enumerate(raw_edges):
        if bad or idx in used:
            continue
        if id(pb) not in index:
            continue  # reached later from its labelled start
        chain_pts = list(pts)
        cur_end = pa
        cur_idx = idx
        used.add(idx)
        end_local = None
        while id(cur_end) not in index:
            nxt = [k for k in by_pass.get(id(cur_end), []) if k != cur_idx]
            if len(nxt) != 1 or nxt[0] in used:
                partial = True
                failures.append("broken chain at a pass-through point")
                break
            cur_idx = nxt[0]
            used.add(cur_idx)
            _, npa, npts, _ = raw_edges[cur_idx]
            chain_pts += npts[1:]
            cur_end = npa
        if id(cur_end) not in index:
            continue
        start_v, end_v = index[id(pb)], index[id(cur_end)]
        k_start = _arrival_ray(pb, arrivals, rays, idx, -1)
        k_end = _arrival_ray(cur_end, arrivals, rays, cur_idx, +1)
        e_idx = len(edges)
        is_real = all(pt is None or abs(pt.imag) <= 1e-9 * (1 + abs(pt)) for pt in chain_pts)
        edges.append(DessinEdge(start_v, end_v, chain_pts, is_real))
        rotation[start_v].append((k_start, (e_idx, +1)))
        rotation[end_v].append((k_end, (e_idx, -1)))
    rotation = {v: [dart for _, dart in sorted(items, key=lambda it: it[0])] for v, items in rotation.items()}
    for i, v in enumerate(vertices):
        v.valency = len(rotation[i])
    faces = _trace_faces(edges, rotation) if not partial else []
    crit = [(None if z is None else complex(z), mu, kind) for z, mu, kind in verts.critical]
    broken = [pts for _, _, pts, bad in raw_edges if bad]
    return Dessin(vertices, edges, rotation, faces, d, partial, failures, vprec, crit, fmap, broken)


def _arrival_ray(p, arrivals, rays, edge_idx, end_sign):
    for a, k in zip(arrivals[id(p)], rays[id(p)]):
        if a[0] == edge_idx and a[1] == end_sign:
            return k
    return 0


def _fmt(z):
    return "oo" if z is None else f"{complex(z):.6g}"


def _make_vertex(p, mk, arrivals):
    label = {"zero": "p", "inf": "q", "one": "r"}.get(mk.kind, "node")
    if p.z is None:
        position, real = None, True
    else:
        position = complex(p.z)
        real = p.z.imag == 0
    value = math.inf if mk.value is None else float(mk.value)
    return DessinVertex(position, label, arrivals, real, p.e, value, p.z is None, p.e - 1, p.z)


def _trace_faces(edges, rotation):
    """Faces as cyclic lists of darts; a dart is ``(edge, +1 | -1)``."""
    pos = {}
    for v, darts in rotation.items():
        for i, dart in enumerate(darts):
            pos[dart] = (v, i)
    seen = set()
    faces = []
    for start in pos:
        if start in seen:
            continue
        face = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            face.append(dart)
            e, direction = dart
            twin = (e, -direction)
            v, i = pos[twin]
            ring = rotation[v]
            dart = ring[(i - 1) % len(ring)]
        faces.append(face)
    return faces
