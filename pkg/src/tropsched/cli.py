"""Command-line front end.

    tropsched frontier FILE [--points N] [--csv PATH]
    tropsched solve    FILE [--alpha R] [--u lo|hi|random] [--seed S]
    tropsched sample   FILE [--alpha R] [--seed S]
    tropsched verify   FILE [--step R] [--tolerance R]

Exit codes: 0 ok, 1 verification failed, 2 invalid instance,
3 bad alpha, 4 oracle limit.
"""

from __future__ import annotations

import argparse
import csv
import decimal
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .errors import (
    AlphaOutOfRange,
    InvalidInstance,
    InvalidProblem,
    NotColumnRegular,
    OracleLimitExceeded,
    UnboundedFrontier,
)
from .linalg import TropicalVector
from .oracle import DEFAULT_GRID_CAP, verify_instance
from .pareto import constants, frontier, solution_at
from .scheduling import evaluate_schedule, load_instance, to_problem, validate
from .semiring import format_rational, parse_rational

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_ALPHA = 3
EXIT_ORACLE = 4

# resolution of the seeded draw inside [u_lo, u_hi]
RANDOM_DENOMINATOR = 10**6

_DEFAULT_FORMAT = {"frontier": "text", "solve": "json", "sample": "json", "verify": "json"}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _q(x) -> str:
    if hasattr(x, "is_zero"):
        return str(x)
    return format_rational(Fraction(x))


def _decimal(q: Fraction) -> str:
    ctx = decimal.Context(prec=15)
    d = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    return format(d, "f")


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path: str):
    try:
        inst = load_instance(path)
    except OSError as exc:
        raise CliError(EXIT_INVALID, f"cannot read {path}: {exc.strerror}") from None
    v = validate(inst)
    for w in v.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return v


def _emit(doc: dict[str, Any], lines: Sequence[str], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(lines))


# ---------------------------------------------------------------------------
# commands

def cmd_frontier(args) -> int:
    v = _load(args.file)
    prob = to_problem(v)
    c = constants(prob)
    front = frontier(prob, c)
    ends = front.endpoints()

    if args.csv:
        if args.points < 2 and front.kind == "segment":
            raise CliError(EXIT_INVALID, "--points must be at least 2 for a segment")
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["alpha", "beta", "flow_time", "makespan"])
            for a, b in front.sample(args.points):
                w.writerow([_decimal(a.value), _decimal(b.value), _decimal(a.value), _decimal(b.value)])

    doc = {
        "instance": v.instance.name,
        "kind": front.kind,
        "alpha_lo": _q(front.alpha_lo),
        "alpha_hi": _q(front.alpha_hi),
        "nu": _q(front.nu),
        "lambda": _q(c.lam),
        "mu": _q(c.mu),
        "coefficients": {str(k): _q(ck) for k, ck in enumerate(c.coefficients, start=1) if ck.is_finite},
        "beta": front.g_formula(),
        "endpoints": [[_q(a), _q(b)] for a, b in ends],
    }
    lines = [
        front.describe(),
        f"lambda = {c.lam}",
        f"mu = {c.mu}",
        f"nu = {c.nu}",
        "endpoints: " + ", ".join(f"({a}, {b})" for a, b in ends),
    ]
    _emit(doc, lines, args.format)
    return EXIT_OK


def _draw(lo: TropicalVector, hi: TropicalVector, seed: int) -> TropicalVector:
    rng = random.Random(seed)
    out = []
    for a, b in zip(lo.fractions(), hi.fractions()):
        r = Fraction(rng.randrange(RANDOM_DENOMINATOR + 1), RANDOM_DENOMINATOR)
        out.append(a + (b - a) * r)
    return TropicalVector(out)


def cmd_solve(args) -> int:
    v = _load(args.file)
    prob = to_problem(v)
    front = frontier(prob)
    alpha = front.alpha_lo.value if args.alpha is None else args.alpha
    sol = solution_at(prob, alpha, front)
    if args.u == "lo":
        u = sol.u_lo
    elif args.u == "hi":
        u = sol.u_hi
    else:
        u = _draw(sol.u_lo, sol.u_hi, args.seed)
    x = sol.materialize(u)
    s = evaluate_schedule(v, x)

    doc = {
        "instance": v.instance.name,
        "alpha": _q(sol.alpha),
        "beta": _q(sol.beta),
        "u_lo": [_q(t) for t in sol.u_lo],
        "u_hi": [_q(t) for t in sol.u_hi],
        "u": [_q(t) for t in u],
        "x": [_q(t) for t in s.start],
        "y": [_q(t) for t in s.finish],
        "flow_time": _q(s.max_flow_time),
        "makespan": _q(s.makespan),
        "unique": sol.is_unique,
    }

    def vec(key):
        return "(" + ", ".join(doc[key]) + ")"

    lines = [
        f"alpha = {doc['alpha']}, beta = {doc['beta']}",
        f"u in [{vec('u_lo')}, {vec('u_hi')}], u = {vec('u')}",
        f"x = {vec('x')}",
        f"y = {vec('y')}",
        f"objectives: ({doc['flow_time']}, {doc['makespan']})",
    ]
    _emit(doc, lines, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    v = _load(args.file)
    front = None
    if args.inject_fault is not None:
        # test hook: check a frontier whose beta curve is lowered on purpose
        front = frontier(to_problem(v)).shifted(-args.inject_fault)
    report = verify_instance(v, args.step, front=front, tolerance=args.tolerance, cap=args.cap)
    doc = report.to_dict()
    lines = [
        f"{'PASS' if report.passed else 'FAIL'} {report.instance}",
        f"max dominance violation: {doc['max_violation']}",
        f"region violation: {doc['region_violation']}",
        f"endpoint gaps: {', '.join(doc['endpoint_gaps'])} (tolerance {doc['tolerance']})",
        "identities: " + ", ".join(f"{k}={'ok' if ok else 'FAIL'}" for k, ok in report.identities.items()),
        "attainment: " + ", ".join(f"{k}={'ok' if ok else 'FAIL'}" for k, ok in report.attainment.items()),
        *report.details,
    ]
    _emit(doc, lines, args.format)
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="tropsched",
        description="Pareto frontiers for bi-objective project scheduling in max-plus algebra.",
        parents=[fmt],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frontier", parents=[fmt], help="compute the Pareto frontier")
    p.add_argument("file")
    p.add_argument("--points", type=int, default=100, help="CSV sample count (default 100)")
    p.add_argument("--csv", metavar="PATH", help="write sampled frontier points as CSV")
    p.set_defaults(func=cmd_frontier)

    for name, help_ in (("solve", "materialize a Pareto-optimal schedule"),
                        ("sample", "same as solve --u random")):
        p = sub.add_parser(name, parents=[fmt], help=help_)
        p.add_argument("file")
        p.add_argument("--alpha", type=_rational_arg, help="flow-time on the frontier (default: lowest)")
        if name == "solve":
            p.add_argument("--u", choices=("lo", "hi", "random"), default="lo")
        else:
            p.set_defaults(u="random")
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[fmt], help="check the frontier against the grid oracle")
    p.add_argument("file")
    p.add_argument("--step", type=_rational_arg, help="grid step (default 1/(2*lcm of denominators))")
    p.add_argument("--tolerance", type=_rational_arg, help="endpoint tolerance (default: the step)")
    p.add_argument("--cap", type=int, default=DEFAULT_GRID_CAP, help="maximum grid size")
    p.add_argument("--inject-fault", type=_rational_arg, metavar="DELTA", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "format"):
        args.format = _DEFAULT_FORMAT[args.command]
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InvalidInstance as exc:
        where = f" at activities {list(exc.indices)}" if exc.indices else ""
        print(f"error: invalid instance [{exc.constraint}]{where}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NotColumnRegular, InvalidProblem, UnboundedFrontier) as exc:
        print(f"error: invalid instance [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AlphaOutOfRange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALPHA
    except OracleLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
