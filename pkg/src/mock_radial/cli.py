"""Command line front end: ``mock-radial <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 numerical domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import MockRadialError, ParseError
from .exact_arith import Cusp, SpecParams, in_Q, in_Qprime, k2_of, k_prime_of
from .identities import IDENTITIES, run_identity
from .modular_kernel import eta_quotient_cusp_order, parse_eta_quotient
from .radial_limits import (
    DEFAULT_TOLERANCE,
    classify,
    closed_form,
    numeric_radial_limit,
    sweep,
)

SCHEMA_VERSION = 1
FIELDS = (
    "schema_version",
    "params",
    "cusp",
    "case",
    "correction",
    "q_re",
    "q_im",
    "numeric_re",
    "numeric_im",
    "abs_diff",
    "status",
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = DEFAULT_TOLERANCE
    t_grid: tuple | None = None
    seed: int = 0
    output_format: str = "text"
    parallelism: int = 1

    def __post_init__(self):
        if not 1e-10 <= self.tolerance <= 1e-1:
            raise ValueError(f"tolerance must be in [1e-10, 1e-1], got {self.tolerance}")
        if self.t_grid is not None:
            g = self.t_grid
            if any(t <= 0 for t in g) or any(b >= a for a, b in zip(g, g[1:])):
                raise ValueError("t grid must be positive and strictly decreasing")
        if self.parallelism < 1:
            raise ValueError("parallelism must be positive")


class _UsageError(Exception):
    pass


_FRACTION = re.compile(r"\s*([+-]?\d+)(?:/(\d+))?\s*$")


def parse_fraction(text):
    """Parse ``p/q`` or ``p``; errors carry the offending column."""
    m = _FRACTION.match(text)
    if not m:
        good = re.match(r"\s*[+-]?\d*(/\d*)?", text).end()
        raise ParseError("expected a fraction p/q", text, good)
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ParseError("zero denominator", text, m.start(2))
    return Fraction(int(num), int(den) if den else 1)


def _canonical(text, label, notes):
    value = parse_fraction(text)
    reduced = value - math.floor(value)
    shown = f"{reduced.numerator}/{reduced.denominator}"
    if text.strip() != shown:
        notes.append(f"note: {label} {text.strip()} canonicalized to {shown}")
    return reduced


def _params_cusp(args, notes):
    params = SpecParams(_canonical(args.ab, "a/b", notes), _canonical(args.AB, "A/B", notes))
    cusp = Cusp(_canonical(args.hk, "h/k", notes)) if getattr(args, "hk", None) else None
    return params, cusp


def _fmt(x):
    return format(float(x), ".17g")


def _finite(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _record(params, cusp, case, correction, q, numeric=None, diff=None, status="closed"):
    return {
        "schema_version": SCHEMA_VERSION,
        "params": f"{params.a}/{params.b} {params.A}/{params.B}",
        "cusp": str(cusp),
        "case": str(case),
        "correction": str(correction),
        "q_re": _finite(q.real),
        "q_im": _finite(q.imag),
        "numeric_re": None if numeric is None else float(numeric.real),
        "numeric_im": None if numeric is None else float(numeric.imag),
        "abs_diff": None if diff is None else float(diff),
        "status": status,
    }


def _dump_json(obj, out):
    out.write(json.dumps(obj, sort_keys=False, ensure_ascii=False) + "\n")


def _csv_row(rec):
    row = []
    for f in FIELDS:
        v = rec[f]
        row.append("" if v is None else _fmt(v) if isinstance(v, float) else v)
    return row


def _config(args):
    tol = args.tolerance
    if tol is None:
        env = os.environ.get("MOCK_RADIAL_TOLERANCE")
        tol = float(env) if env else DEFAULT_TOLERANCE
    grid = tuple(args.grid) if getattr(args, "grid", None) else None
    try:
        return RunConfig(
            tolerance=tol,
            t_grid=grid,
            seed=getattr(args, "seed", 0) or 0,
            output_format="json" if getattr(args, "json", False) else getattr(args, "format", "text") or "text",
            parallelism=getattr(args, "jobs", 1) or 1,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------


def cmd_classify(args, out):
    notes = []
    params, cusp = _params_cusp(args, notes)
    k2, k2p = k2_of(cusp, params.B)
    rec = {
        "params": f"{params.a}/{params.b} {params.A}/{params.B}",
        "cusp": str(cusp),
        "case": str(classify(params, cusp)),
        "k_prime": k_prime_of(cusp, params.B),
        "k2": k2,
        "k2_prime": k2p,
        "in_Q": in_Q(params, cusp),
        "in_Qprime": in_Qprime(params, cusp),
    }
    for n in notes:
        print(n, file=sys.stderr)
    if args.json:
        _dump_json(rec, out)
    else:
        for key, value in rec.items():
            out.write(f"{key}={str(value).lower() if isinstance(value, bool) else value}\n")
    return EXIT_OK


def cmd_limit(args, out):
    cfg = _config(args)
    notes = []
    params, cusp = _params_cusp(args, notes)
    for n in notes:
        print(n, file=sys.stderr)
    result = closed_form(params, cusp)
    code = EXIT_OK
    numeric = diff = None
    status = "closed"
    if args.numeric:
        est = numeric_radial_limit(params, cusp, result.correction, cfg.t_grid)
        numeric = est.value
        diff = abs(numeric - result.constant_Q)
        status = "pass" if diff < cfg.tolerance else "fail"
        code = EXIT_OK if status == "pass" else EXIT_FAIL
    rec = _record(params, cusp, result.case, result.correction, result.constant_Q, numeric, diff, status)
    if cfg.output_format == "json":
        rec["terms"] = [[float(t.real), float(t.imag)] for t in result.terms]
        _dump_json(rec, out)
    else:
        q = result.constant_Q
        out.write(f"case={result.case}\ncorrection={result.correction}\n")
        out.write(f"Q={_fmt(q.real)} {'+' if q.imag >= 0 else '-'} {_fmt(abs(q.imag))}i\n")
        for i, t in enumerate(result.terms):
            out.write(f"term[{i}]={_fmt(t.real)} {_fmt(t.imag)}\n")
        if numeric is not None:
            out.write(f"numeric={_fmt(numeric.real)} {_fmt(numeric.imag)}\n")
            out.write(f"abs_diff={_fmt(diff)}\nstatus={status}\n")
    return code


def cmd_verify_identity(args, out):
    if args.name not in IDENTITIES:
        raise _UsageError(f"unknown identity {args.name!r}; valid names: {', '.join(IDENTITIES)}")
    rep = run_identity(args.name, samples=args.samples, seed=args.seed)
    rec = {
        "identity": rep.name,
        "count": rep.count,
        "worst_residual": rep.worst_residual,
        "worst_point": rep.worst_point,
        "tolerance": rep.tolerance,
        "status": "pass" if rep.passed else "fail",
    }
    if args.json:
        _dump_json(rec, out)
    else:
        out.write(
            f"{rep.name}: {rec['status']} worst residual {rep.worst_residual:.3e} "
            f"at {rep.worst_point} over {rep.count} checks (tolerance {rep.tolerance:g})\n"
        )
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_sweep(args, out):
    cfg = _config(args)
    if args.kmax > 24:
        raise _UsageError(f"--kmax must be <= 24, got {args.kmax}")
    if args.kmax < 0:
        raise _UsageError("--kmax must be nonnegative")
    notes = []
    params, _ = _params_cusp(args, notes)
    for n in notes:
        print(n, file=sys.stderr)
    fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "csv")
    sink = open(args.out, "w", encoding="utf-8", newline="") if args.out else out
    records = []
    try:
        writer = None
        if fmt == "csv":
            writer = csv.writer(sink, lineterminator="\n")
            writer.writerow(FIELDS)
            sink.flush()

        def on_row(row):
            rec = _record(params, row.cusp, row.case, row.correction, row.constant_Q, row.numeric, row.abs_diff, row.status)
            records.append(rec)
            if writer is not None:
                writer.writerow(_csv_row(rec))
                sink.flush()

        rows = sweep(params, args.kmax, cfg.tolerance, numeric=not args.no_numeric, jobs=cfg.parallelism, on_row=on_row)
        if fmt == "json":
            _dump_json(records, sink)
    finally:
        if args.out:
            sink.close()
    corrections = sorted({str(r.correction) for r in rows})
    passed = sum(r.status == "pass" for r in rows)
    checked = sum(r.status != "skipped" for r in rows)
    rate = 100.0 * passed / checked if checked else 100.0
    print(
        f"cusps={len(rows)} distinct_corrections={len(corrections)} "
        f"{{{', '.join(corrections)}}} pass_rate={rate:.1f}%",
        file=sys.stderr,
    )
    return EXIT_OK if passed == checked else EXIT_FAIL


def cmd_eta_order(args, out):
    quot = parse_eta_quotient(args.quotient)
    notes = []
    cusp = Cusp(_canonical(args.hk, "h/k", notes))
    for n in notes:
        print(n, file=sys.stderr)
    order = eta_quotient_cusp_order(quot, cusp)
    verdict = "cuspidal" if order > 0 else "pole" if order < 0 else "bounded, nonzero limit"
    if args.json:
        _dump_json({"quotient": str(quot), "cusp": str(cusp), "order": str(order), "verdict": verdict}, out)
    else:
        out.write(f"order={order}\nverdict={verdict}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser():
    p = _Parser(prog="mock-radial", description="Radial limits of the universal mock theta function g2.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def spec_args(sp, cusp=True):
        sp.add_argument("ab", metavar="a/b")
        sp.add_argument("AB", metavar="A/B")
        if cusp:
            sp.add_argument("hk", metavar="h/k")

    sp = sub.add_parser("classify", help="case tag and cusp data")
    spec_args(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("limit", help="closed-form radial limit constant")
    spec_args(sp)
    sp.add_argument("--numeric", action="store_true", help="also extrapolate along the radial path")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--tolerance", type=float)
    sp.add_argument("--grid", type=float, nargs="+", help="strictly decreasing t values")
    sp.set_defaults(func=cmd_limit)

    sp = sub.add_parser("verify-identity", help=f"identity suites: {', '.join(IDENTITIES)}")
    sp.add_argument("name")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify_identity)

    sp = sub.add_parser("sweep", help="table over all reduced cusps with k <= kmax")
    spec_args(sp, cusp=False)
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "json"))
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--tolerance", type=float)
    sp.add_argument("--no-numeric", action="store_true", help="closed forms only")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("eta-order", help="order of an eta quotient at a cusp")
    sp.add_argument("quotient")
    sp.add_argument("hk", metavar="h/k")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_eta_order)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc.annotated()}", file=sys.stderr)
        return EXIT_USAGE
    except MockRadialError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, ArithmeticError) as exc:
        print(f"error[domain]: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
