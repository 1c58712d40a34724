"""Command-line interface: ``weilv <command> [flags]``.

Exit status 0 when every verdict passes or is not applicable, 2 when a
check fails, 1 on usage or resource errors.  Reports are JSON and are
byte-identical across runs with the same input and flags.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import catalog as cat
from .charsum import exponential_sum, expsum_fixtures, kloosterman, polynomial_from_dict, ramanujan_tau
from .counting import load_variety
from .errors import BudgetExceeded, InsufficientDepth, InputFormatError, WeilvError
from .ffield import ENUMERATION_BUDGET, field
from .report import (build_weil_report, counts_section, dumps, envelope, first_failure, rational_section,
                     _series_coeffs)

COMMANDS = ("count", "zeta", "weil-report", "expsum", "kloosterman", "tau", "selftest")
DEFAULT_DEPTH = 6
DEFAULT_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="variety (or polynomial) JSON file")
    common.add_argument("--fixture", help="use a built-in catalog fixture instead of --input")
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="number of counts N_1..N_m")
    common.add_argument("--num-degree", type=int, help="numerator degree for the rational fit")
    common.add_argument("--den-degree", type=int, help="denominator degree for the rational fit")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance for root magnitudes")
    common.add_argument("--budget", type=int, default=ENUMERATION_BUDGET, help="max candidates per enumeration")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker threads (WEILV_THREADS overrides)")

    parser = _Parser(prog="weilv", description="Point counts, zeta functions and Weil-conjecture checks.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("count", parents=[common], help="point counts and closed-point census")
    sub.add_parser("zeta", parents=[common], help="counts plus the zeta series and its rational form")
    sub.add_parser("weil-report", parents=[common], help="full Weil-conjecture report")
    sub.add_parser("expsum", parents=[common], help="exponential sums against their bound")
    k = sub.add_parser("kloosterman", parents=[common], help="Kloosterman sums against their bound")
    k.add_argument("--p", type=int, required=True, help="characteristic")
    k.add_argument("--a", type=int, default=1, help="extension degree of F_q over F_p")
    k.add_argument("--n", type=int, default=1, help="number of variables")
    k.add_argument("--shift", type=int, help="code of the shift a (default: every nonzero a when n = 1)")
    t = sub.add_parser("tau", parents=[common], help="Ramanujan tau and its bound at primes")
    t.add_argument("--limit", type=int, default=100)
    sub.add_parser("selftest", parents=[common], help="catalog acceptance suite")
    return parser


def _config(args) -> dict:
    if args.tol <= 0:
        raise UsageError("--tol must be > 0")
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")
    if args.budget < 1:
        raise UsageError("--budget must be >= 1")
    if (args.num_degree is None) != (args.den_degree is None):
        raise UsageError("--num-degree and --den-degree go together")
    threads = args.threads
    env = os.environ.get("WEILV_THREADS")
    if env:
        try:
            threads = int(env)
        except ValueError:
            raise UsageError(f"WEILV_THREADS must be an integer, got {env!r}") from None
    if threads < 1:
        raise UsageError("thread count must be >= 1")
    args.threads = threads
    return {"depth": args.depth, "num_degree": args.num_degree, "den_degree": args.den_degree,
            "tol": args.tol, "budget": args.budget, "threads": threads}


def _variety(args):
    if args.input and args.fixture:
        raise UsageError("give either --input or --fixture")
    if args.fixture:
        try:
            return cat.get_fixture(args.fixture).variety
        except KeyError:
            raise UsageError(f"unknown fixture {args.fixture!r}") from None
    if not args.input:
        raise UsageError("this command needs --input or --fixture")
    return load_variety(args.input)


# --- commands -------------------------------------------------------------------

def cmd_count(args, config):
    V = _variety(args)
    T, _, census = counts_section(V, args.depth, budget=args.budget, threads=args.threads)
    return envelope("count", config, {"counts": list(T.counts), "census": census}, V)


def cmd_zeta(args, config):
    V = _variety(args)
    T, _, census = counts_section(V, args.depth, budget=args.budget, threads=args.threads)
    S, Z, rationality, integrality = rational_section(T, args.num_degree, args.den_degree)
    body = {"counts": list(T.counts), "census": census, "series": _series_coeffs(S),
            "rationality": rationality, "integrality": integrality, "zeta": None if Z is None else Z.to_dict()}
    return envelope("zeta", config, body, V)


def cmd_weil(args, config):
    V = _variety(args)
    R = build_weil_report(V, args.depth, num_degree=args.num_degree, den_degree=args.den_degree,
                          tol=args.tol, budget=args.budget, threads=args.threads)
    return envelope("weil-report", config, {"weil": R.to_dict()}, V)


def cmd_expsum(args, config):
    if args.input:
        import json
        with open(args.input) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        polys = [(str(data.get("label", "")) if isinstance(data, dict) else "", polynomial_from_dict(data))]
    else:
        polys = expsum_fixtures()
    results = [exponential_sum(Q, budget=args.budget, label=name).to_dict() for name, Q in polys]
    return envelope("expsum", config, {"charsum": results})


def cmd_kloosterman(args, config):
    try:
        ctx = field(args.p, args.a)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.shift is not None:
        if not 0 < args.shift < ctx.q:
            raise UsageError(f"--shift must be a nonzero element code in 1..{ctx.q - 1}")
        shifts = [args.shift]
    elif args.n == 1:
        shifts = range(1, ctx.q)
    else:
        shifts = [1]
    results = [kloosterman(ctx, args.n, ctx.from_code(s), budget=args.budget).to_dict() for s in shifts]
    config = {**config, "p": args.p, "a": args.a, "n": args.n, "shift": args.shift}
    return envelope("kloosterman", config, {"charsum": results})


def cmd_tau(args, config):
    if args.limit < 1:
        raise UsageError("--limit must be >= 1")
    res = ramanujan_tau(args.limit)
    return envelope("tau", {**config, "limit": args.limit}, {"charsum": {"tau": res.to_dict()}})


def cmd_selftest(args, config):
    from .selftest import run_selftest
    return envelope("selftest", config, {"selftest": run_selftest(budget=args.budget, tol=args.tol)})


HANDLERS = {"count": cmd_count, "zeta": cmd_zeta, "weil-report": cmd_weil, "expsum": cmd_expsum,
            "kloosterman": cmd_kloosterman, "tau": cmd_tau, "selftest": cmd_selftest}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(f"missing command, one of: {', '.join(COMMANDS)}")
        config = _config(args)
        report = HANDLERS[args.command](args, config)
    except UsageError as exc:
        print(f"weilv: exit=1 reason=usage: {exc}", file=stderr)
        return 1
    except (BudgetExceeded, InsufficientDepth) as exc:
        print(f"weilv: exit=1 reason=resource: {exc}", file=stderr)
        return 1
    except (InputFormatError, OSError) as exc:
        print(f"weilv: exit=1 reason=input: {exc}", file=stderr)
        return 1
    except WeilvError as exc:
        print(f"weilv: exit=1 reason={type(exc).__name__}: {exc}", file=stderr)
        return 1
    text = dumps(report)
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"weilv: exit=1 reason=output: {exc}", file=stderr)
            return 1
    else:
        stdout.write(text)
    hit = first_failure(report)
    if hit:
        print(f"weilv: exit=2 reason=check-failed at={hit[0]} verdict={hit[1]}", file=stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
