"""Command-line entry point.

Exit status: 0 when every check passes, 1 on a violated bound or invariant,
2 on a usage or input error, 3 when nothing failed but some result could
not be certified.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .bounds import table
from .errors import DegenerateInput, DomainError, FewnomialError, HypothesisUnmet, NoPositiveSolutions
from .fewnomial import FewnomialFunction, count_roots_unit_interval
from .harness import MODES, RunConfig, default_precision, search_maximizer, verify_batch
from .reduction import BivariateSparseSystem, count_positive_solutions, detect_collinear
from .reduction import monomial_change, normalize_trinomial
from .wronskian import audit_recursion

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input and output


def _load(source):
    """JSON from a file path, ``-`` for stdin, or an inline JSON string."""
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        path = Path(source)
        if not path.exists():
            raise UsageError(f"no such file: {source}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from exc


def _load_system(source):
    data = _load(source)
    try:
        return BivariateSparseSystem.from_json(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a system: {exc}") from exc


def _load_fewnomial(data):
    try:
        return FewnomialFunction.from_json(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a fewnomial: {exc}") from exc


def _flatten(obj, prefix=""):
    """Nested dict to dotted keys, lists kept as JSON text."""
    out = {}
    for key, value in obj.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, name + "."))
        elif isinstance(value, list):
            out[name] = json.dumps(value)
        else:
            out[name] = value
    return out


def _emit(payload, rows, fmt, stream):
    """Write ``payload`` as JSON, or ``rows`` (flat dicts) as CSV or text."""
    if fmt == "json":
        stream.write(json.dumps(payload, indent=2) + "\n")
        return
    rows = [_flatten(r) for r in rows]
    fields = list(dict.fromkeys(k for r in rows for k in r))
    if fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return
    for r in rows:
        stream.write("  ".join(f"{k}={r[k]}" for k in fields if k in r) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_reduce(args, out):
    system = _load_system(args.input)
    normalized = normalize_trinomial(system)
    if detect_collinear(normalized):
        payload = {"collinear": True, "system": normalized.to_json()}
    else:
        payload = monomial_change(normalized).to_json()
    _emit(payload, [_flatten(payload)], args.format, out)
    return EXIT_OK


def cmd_count(args, out):
    data = _load(args.input)
    if isinstance(data, dict) and "terms" in data:
        F = _load_fewnomial(data)
        rc = count_roots_unit_interval(F, method=args.method, precision=args.precision)
        payload = rc.to_json()
        status = EXIT_OK if rc.certified else EXIT_INCONCLUSIVE
    else:
        try:
            system = BivariateSparseSystem.from_json(data)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"not a system or fewnomial: {exc}") from exc
        try:
            result = count_positive_solutions(system, method=args.method, precision=args.precision)
            payload = result.to_json()
        except NoPositiveSolutions as exc:
            payload = {"count": 0, "rigor": "certified", "detail": str(exc)}
            result = None
        if result is None:
            status = EXIT_OK
        elif result.rigor != "certified":
            status = EXIT_INCONCLUSIVE
        else:
            status = EXIT_OK if result.bound_holds else EXIT_VIOLATION
    row = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
    _emit(payload, [row], args.format, out)
    return status


def _parse_t_values(text):
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--t expects comma separated integers, got {text!r}") from exc
    if not values:
        raise UsageError("--t needs at least one value")
    return values


def cmd_bounds(args, out):
    values = _parse_t_values(args.t)
    try:
        reports = table(values)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    rows = [{"t": r.t, "lrw": r.lrw, "kpt": r.kpt, "mr": r.mr, "new": r.new} for r in reports]
    _emit(rows, rows, args.format, out)
    return EXIT_OK


def cmd_wronskian_audit(args, out):
    F = _load_fewnomial(_load(args.input))
    rows = [r.to_json() for r in audit_recursion(F, method=args.method, precision=args.precision)]
    _emit(rows, rows, args.format, out)
    if any(r["verified"] and not r["holds"] for r in rows):
        return EXIT_VIOLATION
    return EXIT_OK if all(r["verified"] for r in rows) else EXIT_INCONCLUSIVE


def _parse_interval(text):
    try:
        lo, hi = (Fraction(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--interval expects lo,hi, got {text!r}") from exc
    if not 0 <= lo < hi <= 1:
        raise UsageError("--interval must satisfy 0 <= lo < hi <= 1")
    return lo, hi


def cmd_dessin(args, out):
    from .dessin import PhiSpec, RationalMap, check_invariants, emit_dessin, trace_dessin
    from .dessin.audit import component_euler_characteristics, proposition_audit
    from .exact import Polynomial

    data = _load(args.input)
    phi = None
    try:
        if "N" in data:
            fmap = RationalMap(
                Polynomial([Fraction(c) for c in data["N"]]),
                Polynomial([Fraction(c) for c in data.get("D", ["1"])]),
            )
        else:
            phi = PhiSpec.from_json(data)
            fmap = phi.rational_map()
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a phi specification: {exc}") from exc
    J = _parse_interval(args.interval)
    d = trace_dessin(fmap, precision=max(args.precision, 128))
    if args.out:
        Path(args.out).write_text(emit_dessin(d, args.drawing, args.upper_half))
    payload = {
        "map": fmap.to_json(),
        "degree": fmap.degree,
        "complete": d.complete,
        "precision": d.precision,
        "vertices": len(d.vertices),
        "edges": len(d.edges),
        "drawing": args.out,
    }
    status = EXIT_OK
    if not d.complete:
        payload["failures"] = d.failures
        status = EXIT_INCONCLUSIVE
    else:
        inv = check_invariants(d)
        payload["invariants"] = inv.to_json()
        payload["component_euler"] = component_euler_characteristics(d)
        if not inv.ok:
            status = EXIT_VIOLATION
        try:
            audit = proposition_audit(d, J, phi)
            payload["proposition"] = audit.to_json()
            if not audit.inequality_holds or audit.sturm_agrees is False:
                status = EXIT_VIOLATION
        except HypothesisUnmet as exc:
            payload["proposition"] = {"skipped": str(exc)}
    row = {k: v for k, v in payload.items() if k not in ("map", "invariants", "proposition")}
    if "proposition" in payload and "r_count" in payload["proposition"]:
        row["r_count"] = payload["proposition"]["r_count"]
        row["s_count"] = payload["proposition"]["s_count"]
    if "invariants" in payload:
        row["invariants_ok"] = payload["invariants"].get("ok")
    _emit(payload, [row], args.format, out)
    return status


def _range(text):
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo,hi integers, got {text!r}") from exc
    return lo, hi


def _run_config(args, mode):
    cfg = RunConfig(
        mode=mode,
        count=args.count,
        t=args.t,
        numerator_range=args.numerators,
        denominator_range=args.denominators,
        coefficient_range=args.coefficients,
        max_degree=args.max_degree,
        integer_exponents=args.integer_exponents,
        seed=args.seed,
        out=args.out,
        reproducer=getattr(args, "reproducer", None),
        precision=args.precision,
        workers=getattr(args, "workers", 1),
    )
    try:
        return cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_verify(args, out):
    cfg = _run_config(args, args.mode)
    summary = verify_batch(cfg)
    payload = summary.to_json()
    _emit(payload, [payload], args.format, out)
    if summary.violations:
        return EXIT_VIOLATION
    return EXIT_INCONCLUSIVE if summary.inconclusive else EXIT_OK


def cmd_search(args, out):
    if args.budget < 1:
        raise UsageError("--budget must be at least 1")
    cfg = _run_config(args, "theorem1")
    cfg.out = None
    rec = search_maximizer(cfg, args.budget)
    payload = rec.to_json()
    if args.out:
        with open(args.out, "a") as sink:
            sink.write(json.dumps(payload) + "\n")
    row = {k: v for k, v in payload.items() if k != "instance"}
    _emit(payload, [row], args.format, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    common.add_argument(
        "--precision",
        type=int,
        default=None,
        help="working precision in bits (default $FEWNOMIALS_PRECISION or 64)",
    )
    common.add_argument("--out", default=None, help="output path")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    parser = argparse.ArgumentParser(
        prog="fewnomials",
        description="Positive solutions of trinomial by t-nomial systems, Wronskian "
        "audits and real dessins.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="reduce a system to F on (0, 1)")
    p.add_argument("input", help="system JSON: file path, - for stdin, or inline")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("count", parents=[common], help="count positive solutions or roots of F")
    p.add_argument("input", help="system or fewnomial JSON")
    p.add_argument("--method", choices=("auto", "exact", "interval"), default="auto")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bounds", parents=[common], help="bound table rows")
    p.add_argument("--t", required=True, help="comma separated t values, each >= 3")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("wronskian-audit", parents=[common], help="Wronskian recursion rows for F")
    p.add_argument("input", help="fewnomial JSON")
    p.add_argument("--method", choices=("auto", "exact", "interval"), default="auto")
    p.set_defaults(func=cmd_wronskian_audit)

    p = sub.add_parser("dessin", parents=[common], help="trace and audit a real dessin")
    p.add_argument("input", help='phi JSON {"a", "b", "m", "P", "Q"} or map JSON {"N", "D"}')
    p.add_argument("--drawing", choices=("svg", "dot"), default="svg", help="format written to --out")
    p.add_argument("--interval", default="0,1", help="interval J as lo,hi (default 0,1)")
    p.add_argument("--upper-half", action="store_true", help="draw only the closed upper half plane")
    p.set_defaults(func=cmd_dessin)

    batch = argparse.ArgumentParser(add_help=False)
    batch.add_argument("--count", type=int, default=100, help="number of instances")
    batch.add_argument("--t", type=int, default=3, help="terms in f")
    batch.add_argument("--numerators", type=_range, default=(-5, 5), help="exponent numerator range lo,hi")
    batch.add_argument("--denominators", type=_range, default=(1, 3), help="exponent denominator range lo,hi")
    batch.add_argument("--coefficients", type=_range, default=(-9, 9), help="coefficient range lo,hi")
    batch.add_argument("--max-degree", type=int, default=6, help="polynomial degree cap")
    batch.add_argument("--integer-exponents", action="store_true")

    p = sub.add_parser("verify", parents=[common, batch], help="randomized batch verification")
    p.add_argument("--mode", choices=MODES, default="theorem1")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--reproducer", default=None, help="reproducer path written on a violation")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common, batch], help="hill-climb for many positive solutions")
    p.add_argument("--budget", type=int, default=1000, help="count evaluations")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None, stdout=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.precision is None:
        args.precision = default_precision()
    if args.precision < 16:
        print("fewnomials: --precision must be at least 16", file=sys.stderr)
        return EXIT_USAGE
    out = stdout or sys.stdout
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"fewnomials {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateInput as exc:
        print(f"fewnomials {args.command}: degenerate input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FewnomialError as exc:
        print(f"fewnomials {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
