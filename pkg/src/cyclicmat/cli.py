"""Command-line front end: bounds evaluation, exact enumeration, Monte
Carlo estimation and sweeps, coprime-pair lemma checks, limiting-series
tables, and the reducibility probe.

Exit codes: 0 success (all bounds hold), 1 usage error, 2 bound failure,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import census, counting, cyclictest, polyring
from .census import BudgetExceededError, DensityReport, SweepItem
from .gf import field_from_order, parse_prime_power
from .matspace import mat_to_string
from .polyring import irr_enumerate

WORKERS_ENV = "CYCLICMAT_WORKERS"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BOUND_FAILURE = 2
EXIT_BUDGET = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2 for
    # bound failures
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit_Usage(message)


class SystemExit_Usage(Exception):
    pass


def _parse_int_list(text: str) -> list[int]:
    """Accepts "2..5", "2,3,4", or "3"."""
    out: list[int] = []
    for piece in text.split(","):
        piece = piece.strip()
        if ".." in piece:
            lo, _, hi = piece.partition("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(piece))
    return out


def _parse_q_list(text: str) -> list[int]:
    out = []
    for piece in text.split(","):
        p, k = parse_prime_power(piece.strip())
        out.append(p ** k)
    return out


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _rat_line(name: str, value: Fraction, note: str = "") -> str:
    s = f"  {name:<18} {counting.rational_str(value):>14}  = {counting.decimal_str(value)}"
    return s + (f"  [{note}]" if note else "")


# ---------------------------------------------------------------------------
# subcommands


def cmd_bounds(args) -> int:
    q = _parse_q_list(args.q)[0]
    rep = counting.bounds_report(args.n, args.r, q)
    if args.format == "json":
        _emit(_json_dumps(rep.to_json_dict()), args.output)
        return EXIT_OK
    lines = [f"bounds for n={args.n} r={args.r} q={q}"]
    lines.append(_rat_line("theorem_lower", rep.theorem_lower))
    lines.append(_rat_line("theorem_upper", rep.theorem_upper,
                           "vacuous" if rep.theorem_upper_vacuous else ""))
    lines.append(_rat_line("pi3_lower", rep.pi3_lower))
    lines.append(_rat_line("pi3_upper", rep.pi3_upper,
                           "vacuous" if rep.pi3_upper >= 1 else ""))
    lines.append(_rat_line("pi3_upper_closed", rep.pi3_upper_closed))
    lines.append(_rat_line("np_lower(n)", rep.np_lower))
    lines.append(_rat_line("np_upper(n)", rep.np_upper))
    lines.append(f"  |M(V)_U|  = {rep.m_order}")
    lines.append(f"  |GL(V)_U| = {rep.glu_order}")
    lines.append(f"  |GL(n,q)| = {rep.gl_order}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _report_exit(report: DensityReport) -> int:
    return EXIT_BOUND_FAILURE if "fail" in report.verdicts.values() else EXIT_OK


def _emit_report(report: DensityReport, args) -> None:
    if args.format == "csv":
        _emit(DensityReport.CSV_HEADER + "\n" + report.to_csv_row() + "\n",
              args.output)
    else:
        _emit(_json_dumps(report.to_json_dict()), args.output)


def cmd_enumerate(args) -> int:
    field = field_from_order(args.q)
    report = census.enumerate_exact(args.n, args.r, field, mode=args.mode,
                                    budget=args.budget, strategy=args.strategy)
    _emit_report(report, args)
    return _report_exit(report)


def cmd_estimate(args) -> int:
    field = field_from_order(args.q)
    report = census.monte_carlo(args.n, args.r, field, mode=args.mode,
                                trials=args.trials, seed=args.seed,
                                ci_level=args.ci, workers=args.workers)
    _emit_report(report, args)
    return _report_exit(report)


def cmd_sweep(args) -> int:
    ns = _parse_int_list(args.n)
    qs = _parse_q_list(args.q)
    points = []
    for n in ns:
        rs = _parse_int_list(args.r) if args.r != "all" else range(1, n)
        for r in rs:
            for q in qs:
                if 0 < r < n:
                    points.append((n, r, q))
    items: list[SweepItem] = []
    out_chunks: list[str] = []
    for item in census.sweep(points, mode=args.mode, method=args.method,
                             budget=args.budget, trials=args.trials,
                             seed=args.seed, ci_level=args.ci,
                             workers=args.workers):
        items.append(item)
        if args.format == "text":
            if item.error:
                out_chunks.append(f"({item.n},{item.r},{item.q}) ERROR {item.error}")
            else:
                rep = item.report
                pi = (counting.rational_str(rep.pi) if rep.method == "exact"
                      else f"{rep.pi:.6f}")
                verdicts = ",".join(f"{k}={v}" for k, v in rep.verdicts.items())
                out_chunks.append(f"({item.n},{item.r},{item.q}) pi={pi} {verdicts}")
    if args.format == "json":
        _emit(_json_dumps([item.to_json_dict() for item in items]), args.output)
    elif args.format == "csv":
        rows = [DensityReport.CSV_HEADER]
        rows += [item.report.to_csv_row() for item in items if item.report]
        _emit("\n".join(rows) + "\n", args.output)
    else:
        _emit("\n".join(out_chunks) + "\n", args.output)
    if any(item.report and "fail" in item.report.verdicts.values() for item in items):
        return EXIT_BOUND_FAILURE
    if any(item.error for item in items):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_lemma(args) -> int:
    q = _parse_q_list(args.q)[0]
    field = field_from_order(q)
    closed = counting.coprime_count(args.r, args.s, q)
    recur = counting.coprime_count_recurrence(args.r, args.s, q)
    brute = polyring.count_coprime_pairs(field, args.r, args.s)
    data = {
        "r": args.r, "s": args.s, "q": q,
        "closed_form": closed, "recurrence": recur, "brute_force": brute,
        "agree": closed == recur == brute,
    }
    if args.d is not None:
        bound = counting.coprime_avoiding_lower(args.r, args.s, args.d, q)
        per_f = []
        for f in irr_enumerate(args.d, field):
            count = polyring.count_coprime_pairs_avoiding(field, args.r, args.s, f)
            per_f.append({"f": str(f), "count": count, "bound_holds": bound <= count})
        data["d"] = args.d
        data["avoiding_lower_bound"] = bound
        data["per_f"] = per_f
    if args.format == "json":
        _emit(_json_dumps(data), args.output)
        return EXIT_OK
    lines = [f"coprime pairs in M_{args.r} x M_{args.s} over F_{q}:",
             f"  closed form = {closed}",
             f"  recurrence  = {recur}",
             f"  brute force = {brute}",
             f"  agree: {data['agree']}"]
    if args.d is not None:
        lines.append(f"avoiding each f in Irr({args.d},{q}): lower bound = "
                     f"{data['avoiding_lower_bound']}")
        for row in data["per_f"]:
            lines.append(f"  f = {row['f']:<16} count = {row['count']:>6}  "
                         f"bound_holds: {row['bound_holds']}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_probe(args) -> int:
    try:
        with open(args.file) as fh:
            alg = cyclictest.parse_generator_file(fh.read())
    except OSError as exc:
        sys.stderr.write(f"error: cannot read {args.file}: {exc}\n")
        return EXIT_USAGE
    report = cyclictest.probe(alg, args.max_tries, seed=args.seed)
    data = {
        "verdict": report.verdict,
        "tries_used": report.tries_used,
        "seed": report.seed,
        "witness": [",".join(map(str, row)) for row in report.witness]
        if report.witness else None,
        "pair": None,
    }
    if report.pair:
        v, X = report.pair
        data["pair"] = {"vector": ",".join(map(str, v)), "matrix": mat_to_string(X)}
    if args.format == "json":
        _emit(_json_dumps(data), args.output)
        return EXIT_OK
    lines = [f"verdict: {report.verdict} (tries={report.tries_used}, "
             f"seed={report.seed})"]
    if report.witness:
        lines.append("invariant subspace basis:")
        lines.extend(f"  {','.join(map(str, row))}" for row in report.witness)
    if report.pair:
        v, X = report.pair
        lines.append(f"cyclic vector: {','.join(map(str, v))}")
        lines.append(f"cyclic matrix: {mat_to_string(X)}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_series(args) -> int:
    rows = [args.r] if args.r is not None else list(range(1, 8))
    data = []
    for r in rows:
        ts = counting.table_series(r, args.kind)
        entry = {"r": r, "kind": ts.kind, "coeffs": list(ts.coeffs),
                 "truncation_order": ts.order}
        if args.q:
            q = _parse_q_list(args.q)[0]
            val = ts.eval(q)
            entry["q"] = q
            entry["cyclic_proportion"] = {
                "rational": counting.rational_str(val),
                "decimal": counting.decimal_str(val),
            }
            entry["noncyclic_proportion"] = {
                "rational": counting.rational_str(1 - val),
                "decimal": counting.decimal_str(1 - val),
            }
        data.append(entry)
    if args.format == "json":
        _emit(_json_dumps(data), args.output)
        return EXIT_OK
    lines = []
    for entry in data:
        lines.append(f"dim U = {entry['r']} ({entry['kind']}): coefficients of "
                     f"q^0..q^-{entry['truncation_order']}: {entry['coeffs']}")
        if args.q:
            lines.append(f"  at q={entry['q']}: cyclic proportion = "
                         f"{entry['cyclic_proportion']['decimal']}, non-cyclic = "
                         f"{entry['noncyclic_proportion']['decimal']}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_common(sp, default_format="json"):
    sp.add_argument("--format", choices=("json", "csv", "text"),
                    default=default_format)
    sp.add_argument("--output", default=None, help="write to file instead of stdout")


def build_parser() -> _Parser:
    parser = _Parser(prog="cyclicmat",
                     description="Density of cyclic matrices in subspace-"
                                 "stabilizer matrix algebras over F_q.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bounds", help="evaluate every closed-form bound")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--q", required=True)
    _add_common(sp, "text")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("enumerate", help="exact exhaustive enumeration")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--mode", choices=("algebra", "group"), default="algebra")
    sp.add_argument("--budget", type=int, default=census.DEFAULT_BUDGET)
    sp.add_argument("--strategy", choices=("auto", "direct", "types"),
                    default="auto")
    _add_common(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("estimate", help="Monte Carlo density estimate")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--mode", choices=("algebra", "group"), default="algebra")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--ci", type=float, default=0.99)
    sp.add_argument("--workers", type=int, default=_default_workers())
    _add_common(sp)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("sweep", help="run a grid of instances")
    sp.add_argument("--n", required=True, help="e.g. 2..5 or 2,3")
    sp.add_argument("--r", default="all", help="e.g. 1,2 or all")
    sp.add_argument("--q", required=True, help="e.g. 2,3 or 2^2")
    sp.add_argument("--mode", choices=("algebra", "group"), default="algebra")
    sp.add_argument("--method", choices=("exact", "monte_carlo"),
                    default="exact")
    sp.add_argument("--budget", type=int, default=census.DEFAULT_BUDGET)
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--ci", type=float, default=0.99)
    sp.add_argument("--workers", type=int, default=_default_workers())
    _add_common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("lemma", help="coprime-pair counts: closed form vs "
                                      "recurrence vs brute force")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--d", type=int, default=None)
    _add_common(sp, "text")
    sp.set_defaults(func=cmd_lemma)

    sp = sub.add_parser("probe", help="search a generated algebra for a "
                                      "cyclic pair or invariant subspace")
    sp.add_argument("--file", required=True)
    sp.add_argument("--max-tries", type=int, default=50, dest="max_tries")
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp, "text")
    sp.set_defaults(func=cmd_probe)

    sp = sub.add_parser("series", help="limiting-proportion series rows")
    sp.add_argument("--r", type=int, default=None)
    sp.add_argument("--kind", choices=("algebra", "group"), default="algebra")
    sp.add_argument("--q", default=None)
    _add_common(sp, "text")
    sp.set_defaults(func=cmd_series)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit_Usage as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except (ValueError, cyclictest.GeneratorFileError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
