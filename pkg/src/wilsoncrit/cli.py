"""Command-line front end: ``check``, ``sweep``, ``t4`` and ``bench``.

Exit codes: 0 success, 1 a criterion contradicted the oracle (or the
criteria disagreed with each other), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import harness
from .criteria import CRITERIA, run_all
from .harness import SweepError
from .modmath import CheckedInt
from .oracle import is_prime_oracle

EXIT_OK, EXIT_DISCREPANCY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _checked(text: str) -> int:
    try:
        return int(CheckedInt(text))
    except (ValueError, OverflowError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _criteria(text: str) -> tuple[str, ...]:
    try:
        return harness.normalize_criteria(c.strip() for c in text.split(",") if c.strip())
    except SweepError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _sizes(text: str) -> list[int]:
    return [_checked(s) for s in text.split(",") if s.strip()]


def _bench_ids(text: str) -> list[str]:
    ids = [c.strip() for c in text.split(",") if c.strip()]
    rest = [c for c in ids if c != "oracle"]
    out = list(_criteria(",".join(rest))) if rest else []
    return out + (["oracle"] if "oracle" in ids else [])


def _workers(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("--workers must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wilsoncrit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="apply every criterion to one integer")
    p.add_argument("n", type=_checked)
    p.add_argument("--criteria", type=_criteria, default=CRITERIA)

    def add_report_flags(p):
        p.add_argument("--out", help="write the report here (default: standard output)")
        p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
        p.add_argument("--workers", type=_workers, default=os.cpu_count() or 1)
        p.add_argument("--fixed-timing", action="store_true", help="zero all timings for reproducible output")

    p = sub.add_parser("sweep", help="cross-check criteria against the oracle over a range")
    p.add_argument("--from", dest="start", type=_checked, required=True)
    p.add_argument("--to", dest="stop", type=_checked, required=True)
    p.add_argument("--criteria", type=_criteria, default=CRITERIA)
    add_report_flags(p)

    p = sub.add_parser("t4", help="sweep the (k-1)!h +/- 1 family")
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--h-max", type=int, default=200)
    add_report_flags(p)

    p = sub.add_parser("bench", help="time criteria at given sizes")
    p.add_argument("--sizes", type=_sizes, required=True)
    p.add_argument("--criteria", type=_bench_ids, default=list(CRITERIA))
    p.add_argument("--repeats", type=int, default=5)
    return parser


def _format_trace(label, verdict, trace) -> str:
    parts = [f"{label}:", f"verdict={verdict}"]
    if verdict.reason:
        parts.append(f"reason={verdict.reason!r}")
    parts.extend(f"{k}={v}" for k, v in trace.intermediates.items())
    if trace.rhs is not None:
        parts.append(f"target={trace.rhs}")
    if trace.lhs is not None:
        parts.append(f"lhs={trace.lhs}")
    if trace.note:
        parts.append(f"note={trace.note!r}")
    return " ".join(parts)


def cmd_check(args, out) -> int:
    result = run_all(args.n, args.criteria)
    oracle = is_prime_oracle(args.n)
    print(f"n={args.n} oracle={'prime' if oracle else 'not prime'}", file=out)
    status = EXIT_OK
    for label, verdict, trace in result:
        print(_format_trace(label, verdict, trace), file=out)
        if verdict.in_domain and verdict.is_prime != oracle:
            status = EXIT_DISCREPANCY
    if result.disagreement is not None:
        print(f"DISAGREEMENT: {result.disagreement}", file=out)
        status = EXIT_DISCREPANCY
    return status


def _emit(report, args, out) -> None:
    data = harness.serialize_report(report, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    elif hasattr(out, "buffer"):
        out.flush()
        out.buffer.write(data)
        out.buffer.flush()
    else:
        out.write(data.decode("utf-8"))


def _summary(report, args, out, err) -> int:
    # summary goes to stderr when the report itself occupies stdout
    dest = out if args.out else err
    for crit, counts in report.totals.items():
        line = " ".join(f"{kind}={count}" for kind, count in counts.items())
        print(f"{crit}: {line}", file=dest)
    print(f"rows={len(report.rows)} discrepancies={len(report.discrepancies)}", file=dest)
    for row in report.discrepancies:
        print(f"DISCREPANCY n={row.n} criterion={row.criterion} verdict={row.verdict} oracle={row.oracle}", file=err)
    return EXIT_DISCREPANCY if report.discrepancies else EXIT_OK


def cmd_sweep(args, out, err) -> int:
    report = harness.sweep_range(
        args.start, args.stop, args.criteria, workers=args.workers, fixed_timing=args.fixed_timing
    )
    _emit(report, args, out)
    return _summary(report, args, out, err)


def cmd_t4(args, out, err) -> int:
    report = harness.sweep_t4(args.k_max, args.h_max, workers=args.workers, fixed_timing=args.fixed_timing)
    _emit(report, args, out)
    dest = out if args.out else err
    for reason, count in report.skipped.items():
        print(f"skipped {reason}: {count}", file=dest)
    print(f"compact-formula sign disagreements={len(report.sign_disagreements)}", file=dest)
    return _summary(report, args, out, err)


def cmd_bench(args, out) -> int:
    table = harness.bench(args.sizes, args.criteria, repeats=args.repeats)
    print(f"{'n':>12} {'criterion':<10} {'elapsed_ns':>14}", file=out)
    for row in table:
        print(f"{row.n:>12} {row.criterion:<10} {row.elapsed_ns:>14}", file=out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "check":
            return cmd_check(args, out)
        if args.command == "sweep":
            return cmd_sweep(args, out, err)
        if args.command == "t4":
            return cmd_t4(args, out, err)
        if args.command == "bench":
            if args.repeats < 1:
                raise UsageError("--repeats must be >= 1")
            return cmd_bench(args, out)
    except UsageError as exc:
        print(f"wilsoncrit: error: {exc}", file=err)
        return EXIT_USAGE
    except (SweepError, OverflowError) as exc:
        print(f"wilsoncrit: error: {exc}", file=err)
        return EXIT_USAGE
    except OSError as exc:
        print(f"wilsoncrit: I/O error: {exc}", file=err)
        return EXIT_USAGE
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
