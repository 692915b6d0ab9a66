"""Cross-validation sweeps of the criteria against the oracle.

Each integer (or T4 form) is evaluated independently, so sweeps can be
fanned out over worker processes; the merged rows are sorted, which makes
the report independent of worker count and scheduling.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .criteria import (
    CRITERIA,
    T4Form,
    Verdict,
    VerdictKind,
    compact_formula_sign,
    case_table_sign,
    criterion_t4,
    evaluate,
    out_of_domain,
    t4_decompose,
)
from .modmath import MAX_CHECKED, CheckedInt, warm_up
from .oracle import DEFAULT_CONFIG, OracleConfig, is_prime_oracle

MAX_SPAN = 10**6
MAX_T4_K = 21  # 20! < 2**63 - 1 < 21!
CSV_FIELDS = ("n", "criterion", "verdict", "reason", "oracle", "agree", "elapsed_ns")


class SweepError(ValueError):
    """Invalid sweep parameters (range, bounds, criterion ids)."""


@dataclass(frozen=True)
class SweepRow:
    n: int
    criterion: str
    verdict: Verdict
    oracle: bool
    agree: bool
    elapsed_ns: int = 0

    @classmethod
    def build(cls, n: int, criterion: str, verdict: Verdict, oracle: bool, elapsed_ns: int = 0) -> SweepRow:
        agree = not verdict.in_domain or verdict.is_prime == oracle
        return cls(n, criterion, verdict, oracle, agree, elapsed_ns)

    @property
    def base_criterion(self) -> str:
        return "t4" if self.criterion.startswith("t4") else self.criterion

    @property
    def form(self) -> T4Form | None:
        if self.criterion.startswith("t4["):
            return T4Form.from_label(self.criterion)
        return None

    def sort_key(self):
        form = self.form
        extra = (form.k, form.epsilon, form.h) if form else ()
        return (self.n, CRITERIA.index(self.base_criterion), extra)

    def identity(self) -> tuple:
        """Row-identifying fields (everything except timing)."""
        return (self.n, self.criterion, self.verdict, self.oracle, self.agree)


@dataclass
class SweepReport:
    rows: list[SweepRow]
    wall_time_ns: int = 0
    # sweep_t4 only: forms left out of rows, by reason
    skipped: dict[str, int] = field(default_factory=dict)
    # sweep_t4 only: in-domain forms where the compact sign exponent
    # disagrees with the case-table sign
    sign_disagreements: list[T4Form] = field(default_factory=list)

    @property
    def discrepancies(self) -> list[SweepRow]:
        return [r for r in self.rows if not r.agree]

    @property
    def totals(self) -> dict[str, dict[str, int]]:
        counts: dict[str, Counter] = {}
        for row in self.rows:
            counts.setdefault(row.base_criterion, Counter())[row.verdict.kind.value] += 1
        return {
            crit: {kind.value: counts[crit][kind.value] for kind in VerdictKind}
            for crit in CRITERIA
            if crit in counts
        }


def _clock(fixed_timing: bool):
    if fixed_timing:
        return lambda: 0
    return time.perf_counter_ns


def _rows_for_n(n: int, criteria: Sequence[str], cfg: OracleConfig, fixed_timing: bool) -> list[SweepRow]:
    clock = _clock(fixed_timing)
    oracle = is_prime_oracle(n, cfg)
    rows = []
    for crit in criteria:
        if crit == "t4":
            try:
                forms = t4_decompose(n)
            except OverflowError as exc:
                rows.append(SweepRow.build(n, "t4", out_of_domain(f"overflow: {exc}"), oracle))
                continue
            if not forms:
                rows.append(SweepRow.build(n, "t4", out_of_domain("no (k-1)!h+/-1 form"), oracle))
            for form in forms:
                t0 = clock()
                try:
                    verdict = criterion_t4(form).verdict
                except OverflowError as exc:
                    verdict = out_of_domain(f"overflow: {exc}")
                rows.append(SweepRow.build(n, form.label, verdict, oracle, clock() - t0))
        else:
            t0 = clock()
            ((_, (verdict, _)),) = evaluate(crit, n)
            rows.append(SweepRow.build(n, crit, verdict, oracle, clock() - t0))
    return rows


def _range_chunk(args) -> list[SweepRow]:
    ns, criteria, cfg, fixed_timing = args
    warm_up()
    rows = []
    for n in ns:
        rows.extend(_rows_for_n(n, criteria, cfg, fixed_timing))
    return rows


def _fan_out(fn, items: list, extra: tuple, workers: int) -> list:
    """Run ``fn((chunk, *extra))`` over strided chunks of items; concatenate results."""
    if workers <= 1 or len(items) < 2:
        return fn((items, *extra))
    # strided chunks balance the O(n) cost growth across workers
    nchunks = min(len(items), workers * 4)
    chunks = [items[i::nchunks] for i in range(nchunks)]
    out = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(fn, [(c, *extra) for c in chunks]):
            out.extend(part)
    return out


def normalize_criteria(criteria: Iterable[str]) -> tuple[str, ...]:
    """Validate ids and return them in canonical order; ``all`` expands."""
    chosen = set()
    for c in criteria:
        if c == "all":
            chosen.update(CRITERIA)
        elif c in CRITERIA:
            chosen.add(c)
        else:
            raise SweepError(f"unknown criterion {c!r}; choose from {', '.join(CRITERIA)}, all")
    if not chosen:
        raise SweepError("no criteria given")
    return tuple(c for c in CRITERIA if c in chosen)


def sweep_range(
    start: int,
    stop: int,
    criteria: Iterable[str],
    cfg: OracleConfig = DEFAULT_CONFIG,
    *,
    workers: int = 1,
    fixed_timing: bool = False,
    max_span: int = MAX_SPAN,
) -> SweepReport:
    """One row per (n, criterion) for n in ``[start, stop]`` (inclusive).

    ``t4`` contributes one row per decomposition of n, or a single
    OutOfDomain row when n has none.
    """
    criteria = normalize_criteria(criteria)
    try:
        start, stop = CheckedInt(start), CheckedInt(stop)
    except (ValueError, OverflowError) as exc:
        raise SweepError(str(exc)) from None
    if start < 2:
        raise SweepError(f"range must start at 2 or above, got {start}")
    if stop < start:
        raise SweepError(f"empty range: from {start} > to {stop}")
    if stop - start > max_span:
        raise SweepError(f"range span {stop - start} exceeds maximum {max_span}")
    t0 = time.perf_counter_ns()
    rows = _fan_out(_range_chunk, list(range(start, stop + 1)), (criteria, cfg, fixed_timing), workers)
    rows.sort(key=SweepRow.sort_key)
    wall = 0 if fixed_timing else time.perf_counter_ns() - t0
    return SweepReport(rows, wall)


def t4_forms(k_max: int, h_max: int) -> list[T4Form]:
    return [T4Form(k, h, eps) for k in range(3, k_max + 1) for h in range(1, h_max + 1) for eps in (-1, 1)]


def _t4_chunk(args):
    forms, cfg, fixed_timing = args
    warm_up()
    clock = _clock(fixed_timing)
    rows, skipped, disagreements = [], Counter(), []
    for form in forms:
        if form.p > MAX_CHECKED:
            skipped["overflow"] += 1
            continue
        t0 = clock()
        verdict, _ = criterion_t4(form)
        elapsed = clock() - t0
        if not verdict.in_domain:
            skipped[verdict.reason] += 1
            continue
        if compact_formula_sign(form) != case_table_sign(form):
            disagreements.append(form)
        rows.append(SweepRow.build(form.p, form.label, verdict, is_prime_oracle(form.p, cfg), elapsed))
    return [(rows, skipped, disagreements)]


def sweep_t4(
    k_max: int,
    h_max: int,
    cfg: OracleConfig = DEFAULT_CONFIG,
    *,
    workers: int = 1,
    fixed_timing: bool = False,
) -> SweepReport:
    """Check the T4 criterion on every form with k in [3, k_max], h in [1, h_max], both signs."""
    if not 3 <= k_max <= MAX_T4_K:
        raise SweepError(f"k_max must be in [3, {MAX_T4_K}], got {k_max}")
    if h_max < 1:
        raise SweepError(f"h_max must be >= 1, got {h_max}")
    t0 = time.perf_counter_ns()
    parts = _fan_out(_t4_chunk, t4_forms(k_max, h_max), (cfg, fixed_timing), workers)
    rows, skipped, disagreements = [], Counter(), []
    for part_rows, part_skipped, part_dis in parts:
        rows.extend(part_rows)
        skipped.update(part_skipped)
        disagreements.extend(part_dis)
    rows.sort(key=SweepRow.sort_key)
    wall = 0 if fixed_timing else time.perf_counter_ns() - t0
    return SweepReport(rows, wall, dict(sorted(skipped.items())), sorted(disagreements))


@dataclass(frozen=True)
class BenchRow:
    n: int
    criterion: str
    elapsed_ns: int


def bench(sizes: Sequence[int], criteria: Iterable[str], repeats: int = 5) -> list[BenchRow]:
    """Median-of-``repeats`` wall time of each criterion at each size.

    Besides the criterion ids, ``oracle`` times :func:`is_prime_oracle`.
    """
    if not sizes:
        raise SweepError("sizes must be nonempty")
    criteria = list(criteria)
    ids = [c for c in criteria if c == "oracle"]
    rest = [c for c in criteria if c != "oracle"]
    ids = list(normalize_criteria(rest)) + ids if rest else ids
    sizes = [CheckedInt(s) for s in sizes]
    warm_up()
    table = []
    for n in sizes:
        for crit in ids:
            if crit == "oracle":
                call = lambda: is_prime_oracle(n)  # noqa: E731
            else:
                call = lambda: evaluate(crit, n)  # noqa: E731
            samples = []
            for _ in range(repeats):
                t0 = time.perf_counter_ns()
                call()
                samples.append(time.perf_counter_ns() - t0)
            table.append(BenchRow(int(n), crit, int(statistics.median(samples))))
    return table


def _row_record(row: SweepRow) -> dict:
    return {
        "n": row.n,
        "criterion": row.criterion,
        "verdict": row.verdict.kind.value,
        "reason": row.verdict.reason,
        "oracle": row.oracle,
        "agree": row.agree,
        "elapsed_ns": row.elapsed_ns,
    }


def serialize_report(report: SweepReport, fmt: str = "csv") -> bytes:
    """Serialize rows as CSV (with header) or JSON lines; LF newlines, UTF-8."""
    buf = io.StringIO(newline="")
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for row in report.rows:
            rec = _row_record(row)
            rec["oracle"] = "true" if row.oracle else "false"
            rec["agree"] = "true" if row.agree else "false"
            writer.writerow(rec[f] for f in CSV_FIELDS)
    elif fmt in ("jsonl", "jsonlines"):
        for row in report.rows:
            buf.write(json.dumps(_row_record(row), separators=(",", ":")))
            buf.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return buf.getvalue().encode("utf-8")


def _row_from_record(rec: dict) -> SweepRow:
    verdict = Verdict(VerdictKind(rec["verdict"]), rec["reason"])
    return SweepRow(int(rec["n"]), rec["criterion"], verdict, rec["oracle"], rec["agree"], int(rec["elapsed_ns"]))


def parse_report(data: bytes, fmt: str = "csv") -> list[SweepRow]:
    text = data.decode("utf-8")
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text, newline=""))
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        rows = []
        for rec in reader:
            rec["oracle"] = rec["oracle"] == "true"
            rec["agree"] = rec["agree"] == "true"
            rows.append(_row_from_record(rec))
        return rows
    if fmt in ("jsonl", "jsonlines"):
        return [_row_from_record(json.loads(line)) for line in text.splitlines() if line]
    raise ValueError(f"unknown format {fmt!r}")
