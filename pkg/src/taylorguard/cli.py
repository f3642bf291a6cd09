"""Command line driver: ``taylorguard --problem bench.json --bits 20``.

Prints one JSON result record on stdout.  Exit status is 0 for a
bracketed crossing, 2 when only a left approximation was found and 1 for
unusable input.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from typing import Optional, Sequence

from .problem import ProblemError, ProblemSpec, parse_problem
from .scalar import Scalar, best_decimal, next_precision, parse_decimal_exact, to_decimal
from .stepper import GuardHit, Status, solve

EXIT_BRACKETED = 0
EXIT_INPUT = 1
EXIT_LEFT_ONLY = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors are input errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="taylorguard",
                description="Bracket the first time a polynomial flow enters a guard set.")
    p.add_argument("--problem", required=True, help="JSON problem file")
    p.add_argument("--bits", required=True, type=int, help="target bits n for the crossing time")
    p.add_argument("--trajectory", help="write accepted step points to this CSV file")
    p.add_argument("--stats", action="store_true", help="print the n p b s l_max time row on stderr")
    p.add_argument("--digits", type=int,
                   help="decimals printed for the state (default: floor(n log10 2))")
    p.add_argument("--delta", help="time radius of the bounding box (decimal)")
    p.add_argument("--epsilon", help="space radius of the bounding box (decimal)")
    p.add_argument("--max-big-steps", type=int)
    p.add_argument("--max-small-steps", type=int)
    p.add_argument("--max-seconds", type=float)
    p.add_argument("--max-bits", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _directed(x: Scalar, digits: int, up: bool) -> str:
    """Decimal at or below ``x.lo`` (or at or above ``x.hi`` when ``up``)."""
    lo, hi = x.bounds()
    scale = 10 ** digits
    v = hi if up else lo
    mag = math.ceil(v * scale) if up else math.floor(v * scale)
    sign = "-" if mag < 0 else ""
    whole, frac = divmod(abs(mag), scale)
    return f"{sign}{whole}.{frac:0{digits}d}"


def time_digits(n: int) -> int:
    # two more than the digits resolved by a 2**-n bracket
    return math.floor(n * math.log10(2)) + 2


def state_digits(n: int) -> int:
    return max(1, math.floor(n * math.log10(2)))


def result_record(hit: GuardHit, n: int, digits: int) -> Optional[dict]:
    """The printable record, or None if a value cannot be shown to ``digits``."""
    td = time_digits(n)
    if to_decimal(hit.t_lo, td) is None:
        return None
    rec: dict = {"status": hit.status.value, "t_lo": _directed(hit.t_lo, td, up=False)}
    if hit.t_hi is not None:
        if to_decimal(hit.t_hi, td) is None:
            return None
        rec["t_hi"] = _directed(hit.t_hi, td, up=True)
    w = [to_decimal(x, digits) for x in hit.state_lo.w]
    if any(x is None for x in w):
        return None
    rec["state_lo"] = w
    rec["stats"] = hit.stats.table_row()
    return rec


def write_trajectory(path: str, hit: GuardHit, digits: int) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        d = hit.state_lo.d
        out.writerow(["t"] + [f"x{j + 1}" for j in range(d)])
        for s in hit.trajectory:
            row = [best_decimal(s.t, digits + 4)] + [best_decimal(x, digits) for x in s.w]
            out.writerow(["" if v is None else v for v in row])


def run(spec: ProblemSpec, n: int, *, digits: Optional[int] = None, delta=None, eps=None,
        budget=None, trajectory: bool = False) -> tuple[GuardHit, dict]:
    """Solve, re-solving with more bits until every printed digit is guaranteed."""
    digits = digits or state_digits(n)
    budget = budget or spec.budget()
    bits = 64
    while True:
        hit = solve(spec.poly_flow(), spec.state(), spec.guard_spec(), n, budget,
                    delta=delta if delta is not None else spec.delta,
                    eps=eps if eps is not None else spec.epsilon,
                    initial_bits=bits, keep_trajectory=trajectory)
        rec = result_record(hit, n, digits)
        if rec is not None:
            return hit, rec
        bits = next_precision(hit.stats.working_bits)
        if bits > budget.max_bits:
            # cannot print what was asked; fall back to what is guaranteed
            rec = result_record(hit, n, 1) or {"status": hit.status.value}
            rec["state_lo"] = [best_decimal(x, digits) for x in hit.state_lo.w]
            return hit, rec


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        if args.bits < 1:
            raise ProblemError("--bits", "must be positive")
        with open(args.problem) as fh:
            spec = parse_problem(fh.read())
        delta = parse_decimal_exact(args.delta) if args.delta else None
        eps = parse_decimal_exact(args.epsilon) if args.epsilon else None
        for name, val in (("--delta", delta), ("--epsilon", eps)):
            if val is not None and val <= 0:
                raise ProblemError(name, "must be positive")
        budget = spec.budget()
        for key in ("max_big_steps", "max_small_steps", "max_seconds", "max_bits"):
            val = getattr(args, key)
            if val is not None:
                setattr(budget, key, val)
    except (OSError, ValueError) as exc:
        print(f"taylorguard: {exc}", file=sys.stderr)
        return EXIT_INPUT

    hit, rec = run(spec, args.bits, digits=args.digits, delta=delta, eps=eps,
                   budget=budget, trajectory=bool(args.trajectory))
    print(json.dumps(rec, indent=2))
    if args.stats:
        row = rec.get("stats", hit.stats.table_row())
        print("  ".join(f"{k}={v}" for k, v in row.items()), file=sys.stderr)
    if args.trajectory:
        write_trajectory(args.trajectory, hit, args.digits or state_digits(args.bits))
    return EXIT_BRACKETED if hit.status is Status.BRACKETED else EXIT_LEFT_ONLY


if __name__ == "__main__":
    sys.exit(main())
