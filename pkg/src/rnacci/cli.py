"""Command-line interface.

Exit status: 0 on success, 1 when a verification fails or ``reproduce``
finds a mismatch, 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import bounds, identities, solver, valuation
from .errors import DomainError
from .sequence import make_params, params_for_k, term

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def parse_range(text: str) -> tuple[int, int]:
    """``"A..B"`` (inclusive) or a single integer ``"A"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or an integer, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _dump(data) -> str:
    return json.dumps(data)


def _cmd_term(args, out) -> int:
    value = term(make_params(args.r), args.n)
    if args.format == "json":
        print(_dump({"r": args.r, "n": args.n, "value": value}), file=out)
    else:
        print(value, file=out)
    return EXIT_OK


def _cmd_nu2(args, out) -> int:
    params = params_for_k(args.k)
    value = valuation.nu2_closed_form(params, args.n)
    status = EXIT_OK
    oracle = None
    if args.check_oracle:
        oracle = valuation.nu2_oracle(params, args.n)
        if oracle != value:
            print(f"mismatch: closed form {value}, oracle {oracle}", file=sys.stderr)
            status = EXIT_FAIL
    if args.format == "json":
        data = {"k": args.k, "n": args.n, "nu2": None if valuation.is_infinite(value) else value}
        if args.check_oracle:
            data["oracle"] = oracle
        print(_dump(data), file=out)
    else:
        print(value, file=out)
    return status


def _cmd_legendre(args, out) -> int:
    b = valuation.legendre_bounds(args.p, args.m)
    if args.format == "json":
        print(_dump({"p": args.p, "m": args.m, "exact": b.exact,
                     "lower": _fraction_text(b.lower), "upper": _fraction_text(b.upper)}), file=out)
    else:
        print(f"{b.exact} (lower {_fraction_text(b.lower)}, upper {_fraction_text(b.upper)})", file=out)
    return EXIT_OK


def _cmd_phi(args, out) -> int:
    try:
        tol = Fraction(args.tol)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"bad tolerance {args.tol!r}") from None
    approx = bounds.phi_root(args.r, tol)
    midpoint = float(f"{approx.midpoint:.15g}")
    if args.format == "json":
        print(_dump({"r": args.r, "lo": _fraction_text(approx.lo), "hi": _fraction_text(approx.hi),
                     "midpoint": midpoint}), file=out)
    else:
        print(f"{approx.midpoint:.15g}", file=out)
    return EXIT_OK


def _suite_limits(name: str) -> identities.SuiteLimits:
    checks = identities.ALL_CHECKS if name == "all" else identities.SUITES[name]
    return identities.SuiteLimits(checks=frozenset(checks))


def _print_reports(reports, fmt, out) -> None:
    if fmt == "json":
        print(_dump([r.to_json() for r in reports]), file=out)
        return
    for r in reports:
        line = f"{'PASS' if r.passed else 'FAIL'}  {r.check_name:<20} {r.parameter_range}"
        if not r.passed:
            line += f"  counterexample={json.dumps(r.counterexample)}"
        print(line, file=out)


def _cmd_verify(args, out) -> int:
    k_lo, k_hi = args.k
    reports = identities.run_suite(range(k_lo, k_hi + 1), _suite_limits(args.suite), workers=args.threads)
    _print_reports(reports, args.format, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_bounds(args, out) -> int:
    rows = bounds.bounds_table(*args.k, *args.d)
    if args.format == "json":
        print(_dump([row.to_json() for row in rows]), file=out)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "d", "m_max", "n_sum_max"])
        writer.writerows([row.k, row.d, row.m_max, row.n_sum_max] for row in rows)
        out.write(buf.getvalue())
    else:
        for row in rows:
            print(f"k={row.k} d={row.d} m_max={row.m_max} n_sum_max={row.n_sum_max}", file=out)
    return EXIT_OK


def _cmd_solve(args, out) -> int:
    grid = solver.solve_grid(*args.k, *args.d, workers=args.threads)
    if args.format == "json":
        print(_dump([s.to_json(k, d) for k, d, sols in grid for s in sols]), file=out)
    else:
        for k, d, sols in grid:
            for s in sols:
                factors = " * ".join(f"t_{n}" for n in s.indices)
                print(f"k={k} d={d}: {s.m}! = {factors}", file=out)
        if not any(sols for _, _, sols in grid):
            print("no nontrivial solutions", file=out)
    return EXIT_OK


def _cmd_reproduce(args, out) -> int:
    ok = True
    reports = identities.run_suite(range(2, 7), workers=args.threads)
    _print_reports(reports, "plain", out)
    ok &= all(r.passed for r in reports)

    table_ok = True
    for row in bounds.bounds_table(2, 5, 1, 10):
        expected = bounds.REFERENCE_M_BOUNDS[row.k][row.d - 1]
        if row.m_max != expected:
            table_ok = False
            print(f"FAIL  bound k={row.k} d={row.d}: computed {row.m_max}, published {expected}", file=out)
    ok &= table_ok
    print(f"{'PASS' if table_ok else 'FAIL'}  m-bound table (2<=k<=5, 1<=d<=10)", file=out)

    found = [(k, d, s) for k, d, sols in solver.solve_grid(2, 5, 1, 10, workers=args.threads) for s in sols]
    expected_solutions = [(2, 1, solver.Solution(3, (5,)))]
    grid_ok = found == expected_solutions
    ok &= grid_ok
    for k, d, s in found:
        print(f"      solution k={k} d={d}: {s.m}! = " + " * ".join(f"t_{n}" for n in s.indices), file=out)
    print(f"{'PASS' if grid_ok else 'FAIL'}  solutions of m! = t_n1 ... t_nd (2<=k<=5, 1<=d<=10)", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rnacci", description="r-nacci numbers, 2-adic valuations and factorial products")
    parser.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    def fmt(p, choices=("plain", "json")):
        p.add_argument("--format", choices=choices, default="plain")

    p = sub.add_parser("term", parents=[common], help="t_n of the order-r sequence")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    fmt(p)
    p.set_defaults(func=_cmd_term)

    p = sub.add_parser("nu2", parents=[common], help="2-adic valuation of t_n for r = 2k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check-oracle", action="store_true")
    fmt(p)
    p.set_defaults(func=_cmd_nu2)

    p = sub.add_parser("legendre", parents=[common], help="nu_p(m!) with its elementary bounds")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    fmt(p)
    p.set_defaults(func=_cmd_legendre)

    p = sub.add_parser("phi", parents=[common], help="dominant root bracket")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--tol", default="1e-25")
    fmt(p)
    p.set_defaults(func=_cmd_phi)

    p = sub.add_parser("verify", parents=[common], help="run the congruence and identity checks")
    p.add_argument("--k", type=parse_range, default=(2, 6))
    p.add_argument("--suite", choices=("all", *identities.SUITES), default="all")
    fmt(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bounds", parents=[common], help="caps on m and on the index sum")
    p.add_argument("--k", type=parse_range, required=True)
    p.add_argument("--d", type=parse_range, required=True)
    fmt(p, ("plain", "json", "csv"))
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("solve", parents=[common], help="all nontrivial solutions of m! = t_n1 ... t_nd")
    p.add_argument("--k", type=parse_range, required=True)
    p.add_argument("--d", type=parse_range, required=True)
    fmt(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("reproduce", parents=[common], help="identity suite, bound table and solution grid")
    p.set_defaults(func=_cmd_reproduce)
    return parser


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise DomainError(f"--threads must be >= 1, got {args.threads}")
        return args.func(args, out)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"rnacci: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
