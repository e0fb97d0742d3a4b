"""Command line front end: compute invariants for builtin or user-supplied
triangulations, render the reference tables, run the verification suites,
and list the catalog."""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import floor

from . import statesum, triangulation
from .cyclotomic import field_new
from .quantum import DenominatorVanished, QAlgebra, ball_removal_identities
from .triangulation import TriangulationError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INTERNAL = 2
EXIT_IDENTITY = 3


def fmt_decimal(x: float, digits: int) -> str:
    """Fixed-point with half-away-from-zero rounding; negative zero is 0."""
    scale = 10 ** digits
    n = floor(abs(x) * scale + 0.5)
    sign = "-" if (n and x < 0) else ""
    return f"{sign}{n // scale}.{n % scale:0{digits}d}"


def _poly_pairs(poly):
    if poly is None:
        return None
    return [[c.numerator, c.denominator] for c in poly.coeffs]


def report_json(report) -> dict:
    inv = {}
    for name in report.QUANTITIES:
        qty = report.quantity(name)
        inv[name] = {
            "poly": _poly_pairs(qty.poly),
            "value_re": qty.value.real,
            "value_im": qty.value.imag,
        }
    return {
        "manifold": report.manifold,
        "r": report.r,
        "invariants": inv,
        "checks": {
            "rationality": all(report.quantity(n).in_q_subfield
                               for n in report.QUANTITIES),
            "reality": all(report.reality_checks().values()),
        },
        "colorings": dict(report.counts),
    }


def _summand_cell(report, name, digits):
    qty = report.quantity(name)
    poly = qty.poly.format() if qty.poly is not None else "(not in Q(q))"
    return f"{poly} = {fmt_decimal(qty.value.real, digits)}"


def render_table(reports, digits: int) -> str:
    """One manifold's reports (ascending r) in the reference row layout."""
    header = ["r", "TV_0", "TV_1", "TV_2", "TV*"]
    rows = [header]
    for rep in reports:
        rows.append([str(rep.r),
                     _summand_cell(rep, "tv0", digits),
                     _summand_cell(rep, "tv1", digits),
                     _summand_cell(rep, "tv2", digits),
                     fmt_decimal(rep.tvstar.value.real, digits)])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in rows]
    lines.insert(1, "-" * max(len(l) for l in lines))
    return "\n".join(lines)


def render_csv_rows(report):
    for name in report.QUANTITIES:
        qty = report.quantity(name)
        poly = qty.poly.format() if qty.poly is not None else ""
        yield [report.manifold or "", str(report.r), name, poly,
               repr(qty.value.real), repr(qty.value.imag)]


def _resolve_spec(args):
    if args.input:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise TriangulationError(f"cannot read {args.input}: {exc}") from exc
        return triangulation.parse(text), os.path.basename(args.input)
    if args.manifold:
        return triangulation.catalog_spec(args.manifold), args.manifold
    raise TriangulationError("provide --input PATH or --manifold NAME")


def _r_values(args):
    if getattr(args, "r", None) is not None:
        return [args.r]
    lo, hi = args.r_range
    return list(range(lo, hi + 1))


def _parse_r_range(text):
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected A:B") from None
    if not 3 <= lo <= hi:
        raise argparse.ArgumentTypeError("need 3 <= A <= B")
    return (lo, hi)


def cmd_compute(args, out):
    spec, name = _resolve_spec(args)
    tri = triangulation.build(spec)
    reports = []
    for r in _r_values(args):
        qspec = statesum.QSpec.standard(field_new(r))
        reports.append(statesum.compute_report(tri, qspec, workers=args.workers,
                                               manifold=name))
    if args.format == "json":
        for rep in reports:
            out.write(json.dumps(report_json(rep)) + "\n")
    elif args.format == "csv":
        out.write("manifold,r,invariant,poly,value_re,value_im\n")
        for rep in reports:
            for row in render_csv_rows(rep):
                out.write(",".join(row) + "\n")
    else:
        out.write(f"Invariants for {name}\n")
        out.write(render_table(reports, args.digits) + "\n")
    return EXIT_OK


def cmd_tables(args, out):
    first = True
    for name in triangulation.catalog():
        tri = triangulation.build(triangulation.catalog_spec(name))
        reports = []
        for r in _r_values(args):
            qspec = statesum.QSpec.standard(field_new(r))
            reports.append(statesum.compute_report(tri, qspec,
                                                   workers=args.workers,
                                                   manifold=name))
        if args.format == "json":
            for rep in reports:
                out.write(json.dumps(report_json(rep)) + "\n")
        elif args.format == "csv":
            if first:
                out.write("manifold,r,invariant,poly,value_re,value_im\n")
            for rep in reports:
                for row in render_csv_rows(rep):
                    out.write(",".join(row) + "\n")
        else:
            if not first:
                out.write("\n")
            out.write(f"Invariants for {name}\n")
            out.write(render_table(reports, args.digits) + "\n")
        first = False
    if args.format == "table":
        out.write("\nS3/Q8: fixture required (supply a gluing file)\n")
        out.write("S3/Q12: fixture required (supply a gluing file)\n")
    return EXIT_OK


def cmd_verify(args, out):
    failures = 0
    r_values = _r_values(args)
    for r in r_values:
        field = field_new(r)
        for label, u in (("q", field.q_std), ("-q", -field.q_std)):
            checks = ball_removal_identities(QAlgebra(field, u))
            ok = all(checks.values())
            failures += 0 if ok else 1
            out.write(f"loop identities r={r} at {label}: "
                      f"{'pass' if ok else 'FAIL ' + str(checks)}\n")
    if args.manifold or args.input:
        specs = [_resolve_spec(args)]
    else:
        specs = [(triangulation.catalog_spec(n), n) for n in triangulation.catalog()]
    for spec, name in specs:
        tri = triangulation.build(spec)
        for r in r_values:
            rep = statesum.verify_identities(tri, r, workers=args.workers,
                                             manifold=name)
            if rep.passed:
                out.write(f"{name} r={r}: all identities hold "
                          f"(colorings {rep.standard.counts})\n")
            else:
                failures += 1
                for c in rep.failures():
                    out.write(f"{name} r={r}: FAIL {c.name}: {c.detail}\n")
    out.write("verification: " + ("all checks passed\n" if not failures
                                  else f"{failures} check group(s) FAILED\n"))
    return EXIT_OK if not failures else EXIT_IDENTITY


def cmd_catalog(args, out):
    for name in triangulation.catalog():
        spec = triangulation.catalog_spec(name)
        h1 = triangulation.catalog_homology(name)
        out.write(f"{name:8s} tetrahedra={spec.n_tets}  H1={h1}\n")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvq",
        description="Exact Turaev-Viro invariants of closed 3-manifolds")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", help="triangulation file")
            p.add_argument("--manifold", help="builtin manifold name")
        p.add_argument("--r", type=int, help="single level r (>= 3)")
        p.add_argument("--r-range", type=_parse_r_range, default=(3, 7),
                       metavar="A:B", help="inclusive level range, default 3:7")
        p.add_argument("--format", choices=("table", "json", "csv"),
                       default="table")
        p.add_argument("--digits", type=int, default=3)
        p.add_argument("--workers", type=int,
                       default=int(os.environ.get("TVQ_WORKERS", "1")))

    p_compute = sub.add_parser("compute", help="invariants for one manifold")
    common(p_compute)
    p_compute.set_defaults(func=cmd_compute)

    p_tables = sub.add_parser("tables", help="reference tables for the catalog")
    common(p_tables, needs_input=False)
    p_tables.set_defaults(func=cmd_tables)

    p_verify = sub.add_parser("verify", help="run the exact identity suites")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_catalog = sub.add_parser("catalog", help="list builtin manifolds")
    p_catalog.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "r", None) is not None and args.r < 3:
        err.write("error: r must be at least 3\n")
        return EXIT_INVALID
    if getattr(args, "digits", 3) < 1:
        err.write("error: digits must be at least 1\n")
        return EXIT_INVALID
    try:
        return args.func(args, out)
    except TriangulationError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
    except (DenominatorVanished, ArithmeticError) as exc:
        err.write(f"internal consistency failure: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
