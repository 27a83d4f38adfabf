"""Command-line interface: ``krpoly {cn,verify,scan,criterion,ek,oracle}``.

Exit codes: 0 success, 1 mathematical inconsistency (two routes disagree),
2 usage error. Payloads go to stdout; ``--progress`` messages go to stderr.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import List, Optional, Sequence

from . import report
from .errors import BudgetExceededError, InconsistencyError, InvalidParametersError
from .exact import as_rational, format_rational, laurent_eval
from .limits import DEFAULT_CROSSCHECK, criterion_scan, ek_search_report, scan_phi
from .numtheory import PROBABLE
from .oracle import DEFAULT_BUDGET
from .polynomials import GF_MAX_ORDER, Route, cn_polynomial
from .verify import oracle_rows, route_rows

EXIT_OK, EXIT_INCONSISTENT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _pairs_arg(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--progress", action="store_true", help="progress messages on stderr")
    common.add_argument("--timing", action="store_true",
                        help="add wall time to the JSON envelope (output is then no longer reproducible)")
    common.add_argument("--max-digits", type=int, default=report.DEFAULT_MAX_DIGITS,
                        help="omit rationals longer than this many digits (default %(default)s)")

    p = argparse.ArgumentParser(prog="krpoly", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cn", parents=[common], help="C_n(q) as coefficients or an exact value")
    c.add_argument("n", type=int)
    c.add_argument("--q", type=_rational_arg)
    c.add_argument("--route", choices=[r.value for r in Route], default=Route.DIVISORS.value)

    v = sub.add_parser("verify", parents=[common], help="cross-check the three routes and the oracle")
    v.add_argument("--max-n", type=int, required=True)
    v.add_argument("--gf-max", type=int)
    v.add_argument("--oracle", action="store_true")
    v.add_argument("--oracle-q", type=_pairs_arg, default=[2, 3])
    v.add_argument("--oracle-budget", type=int, default=DEFAULT_BUDGET)

    s = sub.add_parser("scan", parents=[common], help="group Phi members up to N by k")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--q", type=_rational_arg, default=Fraction(2))
    s.add_argument("--crosscheck", type=int, default=DEFAULT_CROSSCHECK)
    s.add_argument("--workers", type=int, help="worker processes (default: $KRPOLY_WORKERS or 1)")

    k = sub.add_parser("criterion", parents=[common], help="flag n in Phi with |D_n(2)| <= 1/2 + 2^-n")
    k.add_argument("--max-n", type=int, required=True)
    k.add_argument("--epsilon-exponent", type=int)
    k.add_argument("--crosscheck", type=int, default=DEFAULT_CROSSCHECK)
    k.add_argument("--flagged-only", action="store_true")

    e = sub.add_parser("ek", parents=[common], help="deviation records along E_k")
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--max-h", type=int, required=True)
    e.add_argument("--q", type=_rational_arg, default=Fraction(2))
    e.add_argument("--crosscheck", type=int, default=DEFAULT_CROSSCHECK)

    o = sub.add_parser("oracle", parents=[common], help="brute-force ideal count for tiny n, q")
    o.add_argument("--n", type=_pairs_arg, default=[1, 2, 3])
    o.add_argument("--q", type=_pairs_arg, default=[2, 3])
    o.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    return p


def _echo(args: argparse.Namespace) -> List[str]:
    skip = {"command", "format", "progress", "timing", "workers"}
    out = [args.command]
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None or val is False:
            continue
        if isinstance(val, Fraction):
            val = format_rational(val)
        elif isinstance(val, list):
            val = ",".join(map(str, val))
        out.append(f"--{key.replace('_', '-')}={val}")
    return out


def _certainty(decs) -> dict:
    probable = sum(1 for d in decs if d.certainty == PROBABLE)
    return {"proved": len(decs) - probable, "probable": probable}


def _cmd_cn(args, log):
    if args.n < 1:
        raise UsageError("n must be >= 1")
    if args.q is not None and args.q == 0:
        raise UsageError("--q must be nonzero")
    if args.route == Route.GF.value and args.n > GF_MAX_ORDER:
        raise UsageError(f"the gf route is capped at n <= {GF_MAX_ORDER}")
    poly = cn_polynomial(args.n, args.route)
    bounds = {"n": args.n, "route": args.route}
    if args.q is None:
        terms = poly.terms()
        payload = {"n": args.n, "route": args.route, "terms": [[e, c] for e, c in terms]}
        csv_rows = ("exponent,coefficient".split(","), terms)
        pretty = "[" + ",".join(f"({e},{c})" for e, c in terms) + "]\n" + str(poly) + "\n"
    else:
        value = laurent_eval(poly, args.q)
        payload = {"n": args.n, "route": args.route, "value": format_rational(value)}
        csv_rows = (["n", "q", "value_num", "value_den"],
                    [[args.n, format_rational(args.q), value.numerator, value.denominator]])
        pretty = report.short(value, 10 ** 9) + "\n"
    return EXIT_OK, args.q, bounds, {"proved": 0, "probable": 0}, payload, csv_rows, pretty


def _cmd_verify(args, log):
    if args.max_n < 1:
        raise UsageError("--max-n must be >= 1")
    gf_max = min(args.max_n, 200) if args.gf_max is None else args.gf_max
    if gf_max < 0 or gf_max > args.max_n:
        raise UsageError("--gf-max must satisfy 0 <= M <= N")
    if gf_max > GF_MAX_ORDER:
        raise UsageError(f"--gf-max is capped at {GF_MAX_ORDER}")
    rows = route_rows(args.max_n, gf_max, progress=log)
    discrepancies = []
    for r in rows:
        if r.coeffs_vs_divisors is not None:
            discrepancies.append({"n": r.n, "routes": "coeffs/divisors", "first_exponent": r.coeffs_vs_divisors})
        if r.coeffs_vs_gf is not None:
            discrepancies.append({"n": r.n, "routes": "coeffs/gf", "first_exponent": r.coeffs_vs_gf})
        for prob in r.problems:
            discrepancies.append({"n": r.n, "routes": "structure", "problem": prob})
    orows = []
    if args.oracle:
        pairs = [(n, q) for n in range(1, min(args.max_n, 3) + 1) for q in args.oracle_q]
        log(f"oracle on {pairs}")
        orows = oracle_rows(pairs, args.oracle_budget)
        for o in orows:
            if not o.ok:
                discrepancies.append({"n": o.n, "routes": f"oracle/formula q={o.q}",
                                      "bruteforce": o.bruteforce, "formula": o.formula})
    payload = {
        "rows": len(rows),
        "gf_checked": sum(r.gf_checked for r in rows),
        "discrepancy_count": len(discrepancies),
        "discrepancies": discrepancies,
        "oracle": [{"n": o.n, "q": o.q, "bruteforce": o.bruteforce, "formula": o.formula, "match": o.ok}
                   for o in orows],
    }
    header = ["kind", "n", "q", "detail", "ok"]
    csv_body = [["routes", r.n, "", "gf" if r.gf_checked else "coeffs/divisors", int(r.ok)] for r in rows]
    csv_body += [["oracle", o.n, o.q, f"{o.bruteforce}/{o.formula}", int(o.ok)] for o in orows]
    pretty = f"{len(rows)} rows, {payload['gf_checked']} with gf, {len(discrepancies)} discrepancies\n"
    if orows:
        pretty += report.table(["n", "q", "bruteforce", "formula", "match"],
                               [[o.n, o.q, o.bruteforce, o.formula, o.ok] for o in orows])
    for d in discrepancies:
        pretty += f"MISMATCH {d}\n"
    code = EXIT_INCONSISTENT if discrepancies else EXIT_OK
    bounds = {"max_n": args.max_n, "gf_max": gf_max}
    return code, None, bounds, {"proved": 0, "probable": 0}, payload, (header, csv_body), pretty


def _cmd_scan(args, log):
    if args.max_n < 0:
        raise UsageError("--max-n must be >= 0")
    if args.q < 2:
        raise UsageError("--q must be >= 2")
    log(f"scanning Phi up to {args.max_n}")
    rep = scan_phi(args.max_n, args.q, args.crosscheck, workers=args.workers)
    md = args.max_digits
    payload = report.cluster_json(rep, md)
    rows = [report.record_row(r, md) for r in rep.records]
    pretty = report.table(
        ["k", "count", "members", "limit", "max|residual|"],
        [[g.k, g.count, ",".join(map(str, g.members[:6])) + ("..." if g.count > 6 else ""),
          report.lazy_text(rep.q, abs(g.k), lambda g=g: g.limit, 40) or "-",
          f"(q-1)q^-{g.max_residual_exponent}"] for g in rep.ordered_groups()],
    )
    bounds = {"max_n": args.max_n, "crosscheck": rep.crosscheck_bound}
    return EXIT_OK, args.q, bounds, rep.certainty_counts(), payload, (report.RECORD_COLUMNS, rows), pretty


def _cmd_criterion(args, log):
    if args.max_n < 0:
        raise UsageError("--max-n must be >= 0")
    rows = criterion_scan(args.max_n, args.epsilon_exponent, args.crosscheck)
    payload = report.criterion_json(rows, args.max_digits, args.flagged_only)
    shown = [r for r in rows if r.flagged] if args.flagged_only else rows
    header = ["n", "k", "abs_deviation_num", "abs_deviation_den", "flagged", "certainty"]
    csv_body = [[r.n, r.decomposition.k, *report.rational_parts(r.abs_deviation, args.max_digits),
                 int(r.flagged), r.decomposition.certainty] for r in shown]
    pretty = report.table(["n", "k", "|D_n(2)|", "flagged"],
                          [[r.n, r.decomposition.k, report.short(r.abs_deviation), r.flagged]
                           for r in rows if r.flagged])
    pretty += f"{len(rows)} members of Phi scanned, {sum(r.flagged for r in rows)} flagged\n"
    bounds = {"max_n": args.max_n, "epsilon_exponent": args.epsilon_exponent, "crosscheck": args.crosscheck}
    return (EXIT_OK, Fraction(2), bounds, _certainty([r.decomposition for r in rows]),
            payload, (header, csv_body), pretty)


def _cmd_ek(args, log):
    if args.max_h < 1:
        raise UsageError("--max-h must be >= 1")
    if args.q < 2:
        raise UsageError("--q must be >= 2")
    if args.k % 2 == 0:
        log(f"k={args.k} is even: E_k is empty")
    recs = ek_search_report(args.k, args.max_h, args.q, args.crosscheck)
    md = args.max_digits
    payload = {"k": args.k, "records": [report.record_json(r, md) for r in recs]}
    rows = [report.record_row(r, md) for r in recs]
    pretty = report.table(["n", "h", "p", "k", "deviation", "residual", "certainty"],
                          [[r.n, r.decomposition.h, r.decomposition.p, r.k,
                            report.lazy_text(r.q, r.n, lambda r=r: r.deviation, 40) or "-",
                            f"-(q-1)q^-{r.n}", r.decomposition.certainty] for r in recs])
    bounds = {"k": args.k, "max_h": args.max_h, "crosscheck": args.crosscheck}
    return (EXIT_OK, args.q, bounds, _certainty([r.decomposition for r in recs]),
            payload, (report.RECORD_COLUMNS, rows), pretty)


def _cmd_oracle(args, log):
    pairs = [(n, q) for n in args.n for q in args.q]
    orows = oracle_rows(pairs, args.budget)
    payload = {"rows": [{"n": o.n, "q": o.q, "bruteforce": o.bruteforce, "formula": o.formula, "match": o.ok}
                        for o in orows]}
    header = ["n", "q", "bruteforce", "formula", "match"]
    body = [[o.n, o.q, o.bruteforce, o.formula, int(o.ok)] for o in orows]
    pretty = report.table(header, [[o.n, o.q, o.bruteforce, o.formula, o.ok] for o in orows])
    code = EXIT_OK if all(o.ok for o in orows) else EXIT_INCONSISTENT
    return code, None, {"n": args.n, "q": args.q}, {"proved": 0, "probable": 0}, payload, (header, body), pretty


COMMANDS = {
    "cn": _cmd_cn, "verify": _cmd_verify, "scan": _cmd_scan,
    "criterion": _cmd_criterion, "ek": _cmd_ek, "oracle": _cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    report.allow_big_int_text()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    def log(msg: str) -> None:
        if args.progress:
            print(f"[krpoly] {msg}", file=sys.stderr, flush=True)

    start = time.perf_counter()
    try:
        code, q, bounds, certainty, payload, (header, rows), pretty = COMMANDS[args.command](args, log)
    except (UsageError, InvalidParametersError, BudgetExceededError) as exc:
        print(f"krpoly {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InconsistencyError as exc:
        print(f"krpoly {args.command}: INCONSISTENCY: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    elapsed = time.perf_counter() - start
    log(f"done in {elapsed:.3f}s")

    if args.format == "json":
        env = report.envelope(_echo(args), q, bounds, certainty, payload,
                              wall_time=elapsed if args.timing else None)
        sys.stdout.write(report.dump_json(env))
    elif args.format == "csv":
        sys.stdout.write(report.dump_csv(header, rows))
    else:
        sys.stdout.write(pretty)
    return code


if __name__ == "__main__":
    sys.exit(main())
