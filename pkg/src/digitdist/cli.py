"""Command line front end.

Subcommands: cover | analyze | verify | dimension | oracle-census.
Exit codes: 0 success or verification pass, 1 verification fail,
2 unsupported input, 3 malformed spec.  All outputs are deterministic for
a fixed invocation; --plot renders matplotlib figures next to the CSV/JSON
outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .analyze import UNSUPPORTED, analyze_spec
from .dimension import empirical_dimension, mass_dimension
from .oracle import census, compare, convergence_table, default_exponent
from .shifts import (
    NonTransitiveError,
    ShiftSpec,
    ShiftSpecError,
    build_cover,
    fischer_cover,
    is_mixing,
    is_transitive,
    regularity_k,
)
from .words import DomainError, GAdditiveFamily, Word, load_function, id_sum_family

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_UNSUPPORTED = 2
EXIT_MALFORMED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="digitdist",
        description="Distribution of digit-restricted integers in residue "
        "classes, with exact Markov-chain predictions and a brute-force "
        "oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, moduli=True, horizon=False):
        p.add_argument("--shift", required=True, help="shift spec JSON file")
        if moduli:
            p.add_argument("--mod", type=int, default=1, metavar="A",
                           help="modulus for the integer itself")
            p.add_argument("--summod", type=int, default=1, metavar="A2",
                           help="modulus for the digit sum")
            p.add_argument("--fn", action="append", default=[], metavar="PATH",
                           help="g-additive function file (repeatable; "
                           "overrides --mod/--summod)")
        if horizon:
            p.add_argument("--mmax", type=int, default=None, metavar="M",
                           help="horizon exponent (default: from language size)")
            p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                           metavar="K", help="oracle worker processes")
        p.add_argument("--out", default=None, metavar="PATH", help="JSON output")
        p.add_argument("--csv", default=None, metavar="PATH", help="CSV output")
        p.add_argument("--plot", default=None, metavar="PATH", help="PNG figure")
        p.add_argument("--msb", action="store_true",
                       help="print words most significant digit first")

    p_cover = sub.add_parser("cover", help="Fischer cover and structure flags")
    p_cover.add_argument("--shift", required=True)
    p_cover.add_argument("--out", default=None)

    p_an = sub.add_parser("analyze", help="predicted limit distribution")
    add_common(p_an)

    p_ver = sub.add_parser("verify", help="analysis checked against the oracle")
    add_common(p_ver, horizon=True)
    p_ver.add_argument("--tol", type=float, default=0.02,
                       help="total-variation tolerance (default 0.02)")

    p_dim = sub.add_parser("dimension", help="mass dimension report")
    p_dim.add_argument("--shift", required=True)
    p_dim.add_argument("--progression", nargs=2, type=int, default=None,
                       metavar=("A", "B"), help="intersect with A*N + B")
    p_dim.add_argument("--mmax", type=int, default=12)
    p_dim.add_argument("--out", default=None)
    p_dim.add_argument("--csv", default=None)
    p_dim.add_argument("--plot", default=None)

    p_cen = sub.add_parser("oracle-census", help="exact residue census")
    add_common(p_cen, horizon=True)

    return parser


def _load_spec(path: str) -> ShiftSpec:
    return ShiftSpec.load(path)


def _family(spec: ShiftSpec, args) -> GAdditiveFamily:
    if args.fn:
        funcs = tuple(load_function(p) for p in args.fn)
        return GAdditiveFamily(spec.base, funcs)
    return id_sum_family(spec.base, args.mod, args.summod)


def _fmt_word(word: Word, msb: bool) -> str:
    return word.msb_str() if msb else word.lsb_str()


def _fmt_frac(v) -> str:
    if v is None:
        return "DNE"
    return f"{v.numerator}/{v.denominator}"


def _write(path, text):
    with open(path, "w") as f:
        f.write(text)


def _report_csv(report) -> str:
    lines = ["residue,limit,limit_float"]
    for r, v in sorted(report.table.items()):
        if v is None:
            lines.append(",".join(map(str, r)) + ",DNE,")
        else:
            lines.append(
                ",".join(map(str, r)) + f",{v.numerator}/{v.denominator},{float(v):.10g}"
            )
    return "\n".join(lines) + "\n"


def cmd_cover(args) -> int:
    spec = _load_spec(args.shift)
    cover = build_cover(spec)
    try:
        fc = fischer_cover(cover)
    except NonTransitiveError as exc:
        print("shift is not transitive; strongly connected components:")
        for i, comp in enumerate(exc.cover_sccs):
            print(f"  component {i}: {sorted(map(str, comp))}")
        return EXIT_UNSUPPORTED
    k = regularity_k(fc)
    flags = []
    flags.append("transitive" if is_transitive(fc) else "not transitive")
    if is_mixing(fc):
        flags.append("mixing")
    kstr = f"k={k}" if k is not None else "irregular"
    print(f"{len(fc.nodes)} nodes, {kstr}, " + ", ".join(flags))
    for u, v, d in fc.edges():
        print(f"  {u} -{d}-> {v}")
    sync = {n: "".join(map(str, w)) for n, w in sorted(fc.sync_words.items())}
    print(f"synchronizing witnesses: {sync}")
    if args.out:
        obj = {
            "schema": 1,
            "nodes": list(fc.nodes),
            "edges": [[u, d, v] for u, v, d in fc.edges()],
            "k": k,
            "transitive": is_transitive(fc),
            "mixing": is_mixing(fc),
            "sync_words": sync,
        }
        _write(args.out, json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _run_analysis(spec, args):
    if args.fn:
        return analyze_spec(spec, 1, 1, functions=_family(spec, args))
    return analyze_spec(spec, args.mod, args.summod)


def _print_report(report, msb: bool):
    print(f"verdict: {report.verdict}")
    print(f"method: {report.method}")
    if report.table:
        print("predicted limit per residue class:")
        for r, v in sorted(report.table.items()):
            mark = _fmt_frac(v)
            extra = f"  {float(v):.6f}" if v is not None else ""
            print(f"  ({','.join(map(str, r))})  {mark}{extra}")
    if report.subgroup:
        print(f"subgroup: {report.subgroup}")
    for key, val in sorted(report.witnesses.items()):
        if isinstance(val, Word):
            print(f"{key}: {_fmt_word(val, msb)}")
        else:
            print(f"{key}: {val}")
    for note in report.notes:
        print(f"note: {note}")


def cmd_analyze(args) -> int:
    spec = _load_spec(args.shift)
    report = _run_analysis(spec, args)
    _print_report(report, args.msb)
    if args.out:
        _write(args.out, json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    if args.csv:
        _write(args.csv, _report_csv(report))
    if args.plot:
        from .figures import plot_census

        fam = _family(spec, args)
        try:
            m = min(default_exponent(spec), 8)
            table = census(spec, fam, max_exponent=m)
            plot_census(table, report.table, args.plot)
        except (DomainError, NonTransitiveError):
            pass
    return EXIT_UNSUPPORTED if report.verdict == UNSUPPORTED else EXIT_OK


def cmd_verify(args) -> int:
    spec = _load_spec(args.shift)
    report = _run_analysis(spec, args)
    if report.verdict == UNSUPPORTED:
        _print_report(report, args.msb)
        print("verification skipped: unsupported input")
        return EXIT_UNSUPPORTED
    fam = _family(spec, args)
    m = args.mmax if args.mmax is not None else default_exponent(spec)
    table = census(spec, fam, max_exponent=m, threads=args.threads)
    result = compare(report.table, table, tolerance=args.tol)
    print(f"predicted: {report.verdict} via {report.method}")
    print(f"oracle horizon: {spec.base}^{m} ({table.total} members)")
    print(
        f"tv distance: {result.tv_distance:.6f} (tolerance {result.tolerance}) "
        f"-> {'PASS' if result.passed else 'FAIL'}"
    )
    for note in result.notes:
        print(f"note: {note}")
    rows = None
    if args.csv or args.plot:
        rows = convergence_table(spec, fam, report.table, m)
    if args.csv:
        _write(
            args.csv,
            "m,tv\n" + "\n".join(f"{mm},{tv:.12g}" for mm, tv in rows) + "\n",
        )
    if args.plot:
        from .figures import plot_convergence

        plot_convergence(rows, args.plot)
    if args.out:
        obj = {
            "schema": 1,
            "report": report.to_json(),
            "horizon_exponent": m,
            "members": table.total,
            "tv_distance": result.tv_distance,
            "max_cell_error": result.max_cell_error,
            "tolerance": result.tolerance,
            "passed": result.passed,
        }
        _write(args.out, json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if result.passed else EXIT_VERIFY_FAIL


def cmd_dimension(args) -> int:
    spec = _load_spec(args.shift)
    if args.progression:
        a, b = args.progression
        est = empirical_dimension(spec, progression=(a, b), m_max=args.mmax)
        try:
            from .dimension import transversality_check

            res = transversality_check(spec, a, b)
            print(f"transversality: {res.verdict}")
            if res.members is not None:
                print(f"members: {res.members}")
        except (NonTransitiveError, DomainError) as exc:
            print(f"transversality: unsupported ({exc})")
    else:
        est = mass_dimension(spec, m_max=args.mmax)
    if est.exact is not None:
        print(f"exact dimension: {est.exact:.10f}")
    if est.fitted_slope is not None:
        print(f"empirical slope: {est.fitted_slope:.6f}")
        print(f"slope bounds: [{est.lower_slope:.6f}, {est.upper_slope:.6f}]")
    if est.empty_at_horizon:
        print("intersection empty at this horizon")
    if args.out:
        _write(args.out, json.dumps(est.to_json(), indent=2, sort_keys=True) + "\n")
    if args.csv:
        _write(
            args.csv,
            "m,count\n" + "\n".join(f"{m},{c}" for m, c in est.counts) + "\n",
        )
    if args.plot:
        from .figures import plot_dimension

        plot_dimension(est, args.plot)
    return EXIT_OK


def cmd_oracle_census(args) -> int:
    spec = _load_spec(args.shift)
    fam = _family(spec, args)
    m = args.mmax if args.mmax is not None else default_exponent(spec)
    table = census(spec, fam, max_exponent=m, threads=args.threads)
    print(f"horizon: {spec.base}^{m}, members: {table.total}")
    for r in sorted(table.frequencies()):
        f = table.frequency(r)
        print(
            f"  ({','.join(map(str, r))})  count {table.counts.get(r, 0)}  "
            f"{f.numerator}/{f.denominator}"
        )
    if args.csv:
        _write(args.csv, table.csv())
    if args.out:
        obj = {
            "schema": 1,
            "horizon_exponent": m,
            "total": table.total,
            "counts": {",".join(map(str, r)): c for r, c in sorted(table.counts.items())},
        }
        _write(args.out, json.dumps(obj, indent=2, sort_keys=True) + "\n")
    if args.plot:
        from .figures import plot_census

        plot_census(table, {}, args.plot)
    return EXIT_OK


COMMANDS = {
    "cover": cmd_cover,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
    "dimension": cmd_dimension,
    "oracle-census": cmd_oracle_census,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ShiftSpecError as exc:
        print(f"malformed spec: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except NonTransitiveError as exc:
        print(f"unsupported input: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (DomainError,) as exc:
        print(f"unsupported input: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    raise SystemExit(main())
