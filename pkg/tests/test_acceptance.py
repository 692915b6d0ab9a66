"""Acceptance gate: one test per exit criterion, each reported PASS/FAIL.

Tolerances are exact (integer congruences) except criterion 9, which
requires the timing ratio for a doubled n to fall in [1.5, 3.0].
"""

import functools
import math
import random

import pytest

from wilsoncrit.criteria import ADMISSIBLE_T3_REMAINDERS, T4Form, VerdictKind, case_table_sign
from wilsoncrit.harness import bench, serialize_report, sweep_range, sweep_t4
from wilsoncrit.modmath import MAX_CHECKED, factorial_mod, mul_mod
from wilsoncrit.oracle import is_prime_oracle

RESULTS: dict[int, tuple[str, str]] = {}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            RESULTS[number] = (title, "FAIL")
            fn(*args, **kwargs)
            RESULTS[number] = (title, "PASS")

        return inner

    return wrap


@pytest.fixture(scope="module", autouse=True)
def report_lines(request):
    yield
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    if tr is None:
        return
    tr.write_line("")
    for number in sorted(RESULTS):
        title, status = RESULTS[number]
        tr.write_line(f"ACCEPTANCE {number}: {status}  {title}")


@pytest.fixture(scope="module")
def desk_sweep():
    # n in [3, 20001] covers every range used by criteria 1-4
    return sweep_range(3, 20001, ["t1", "t2", "t3", "lemma1"])


@pytest.fixture(scope="module")
def t4_family():
    return sweep_t4(9, 200)


def _rows(report, crit, lo, hi):
    return [r for r in report.rows if r.criterion == crit and lo <= r.n <= hi]


@criterion(1, "Theorem 1 equivalence on [3, 20001]")
def test_theorem1(desk_sweep):
    rows = _rows(desk_sweep, "t1", 3, 20001)
    assert len(rows) == 19999
    for r in rows:
        if r.n % 2:
            assert r.verdict.in_domain and r.verdict.is_prime == r.oracle, r
        else:
            assert r.verdict.kind is VerdictKind.COMPOSITE, r
    assert not [r for r in rows if not r.agree]


@criterion(2, "Theorem 2 equivalence on [5, 20000]")
def test_theorem2(desk_sweep):
    rows = _rows(desk_sweep, "t2", 5, 20000)
    assert len(rows) == 19996
    assert all(r.verdict.in_domain and r.verdict.is_prime == r.oracle for r in rows)


@criterion(3, "Theorem 3 equivalence on [5, 20000]; primes have admissible r")
def test_theorem3(desk_sweep):
    rows = _rows(desk_sweep, "t3", 5, 20000)
    assert len(rows) == 19996
    assert all(r.verdict.in_domain and r.verdict.is_prime == r.oracle for r in rows)
    primes = [r.n for r in rows if r.oracle]
    assert len(primes) == 2260
    assert all(p - 24 * (p // 24) in ADMISSIBLE_T3_REMAINDERS for p in primes)


@criterion(4, "Lemma 1 equivalence on [5, 20000]; 3! mod 4 == 2")
def test_lemma1(desk_sweep):
    rows = _rows(desk_sweep, "lemma1", 5, 20000)
    assert len(rows) == 19996
    assert all(r.verdict.in_domain and r.verdict.is_prime == r.oracle for r in rows)
    assert factorial_mod(3, 4) == 2


@criterion(5, "Theorem 4 family k in [3, 9], h in [1, 200], both signs")
def test_theorem4_family(t4_family):
    report = t4_family
    assert report.discrepancies == []
    assert len(report.rows) + sum(report.skipped.values()) == 7 * 200 * 2
    # only p=1 and p=3 are degenerate
    assert report.skipped == {"p < 2": 1, "p <= k": 2}
    assert all(r.verdict.is_prime == r.oracle for r in report.rows)


@criterion(6, "compact sign formula disagrees with the case table, witness (3, 2, +1)")
def test_compact_formula_audit(t4_family):
    assert len(t4_family.sign_disagreements) > 0
    assert T4Form(3, 2, 1) in t4_family.sign_disagreements
    # every prime in the family satisfies the case-table congruence
    prime_rows = [r for r in t4_family.rows if r.oracle]
    assert prime_rows
    assert all(r.verdict.kind is VerdictKind.PRIME for r in prime_rows)
    assert math.factorial(5 - 3) % 5 == case_table_sign(T4Form(3, 2, 1)) * 2 % 5


def _schoolbook_mod(a, b, m):
    """Decimal long multiplication, then digit-serial reduction."""
    xs = [int(c) for c in str(a)][::-1]
    ys = [int(c) for c in str(b)][::-1]
    prod = [0] * (len(xs) + len(ys))
    for i, x in enumerate(xs):
        carry = 0
        for j, y in enumerate(ys):
            t = prod[i + j] + x * y + carry
            prod[i + j], carry = t % 10, t // 10
        prod[i + len(ys)] += carry
    r = 0
    for d in reversed(prod):
        r = r * 10 + d
        while r >= m:
            r -= m
    return r


@criterion(7, "kernel: 10^4 mul_mod triples; factorial_mod for n <= 2000 over 100 moduli")
def test_kernel():
    rng = random.Random(20260101)
    for _ in range(10_000):
        m = rng.randint(2, MAX_CHECKED)
        a, b = rng.randrange(m), rng.randrange(m)
        assert mul_mod(a, b, m) == _schoolbook_mod(a, b, m)
    # moduli spread over every bit length, so both kernel paths are exercised
    moduli = [rng.randint(2, 2 ** rng.randint(2, 63) - 1) for _ in range(100)]
    fact = 1
    for n in range(0, 2001):
        fact *= max(n, 1)
        for m in moduli:
            assert factorial_mod(n, m) == fact % m, (n, m)


@criterion(8, "determinism: 1 vs many workers, byte-identical fixed-timing output")
def test_determinism():
    one = sweep_range(2, 2000, ["all"], fixed_timing=True, workers=1)
    many = sweep_range(2, 2000, ["all"], fixed_timing=True, workers=4)
    assert one.rows == many.rows and one.totals == many.totals
    for fmt in ("csv", "jsonl"):
        assert serialize_report(one, fmt) == serialize_report(many, fmt)
        again = sweep_range(2, 2000, ["all"], fixed_timing=True, workers=1)
        assert serialize_report(again, fmt) == serialize_report(one, fmt)
    fam1 = sweep_t4(6, 60, fixed_timing=True, workers=1)
    fam4 = sweep_t4(6, 60, fixed_timing=True, workers=4)
    assert fam1 == fam4
    assert serialize_report(fam1) == serialize_report(fam4)


def _next_prime(n):
    while not is_prime_oracle(n):
        n += 1
    return n


@criterion(9, "bench: doubling n scales factorial criteria by [1.5, 3.0]")
def test_bench_linear():
    # primes, so no criterion short-circuits (even n for t1, r not coprime to 24 for t3)
    sizes = [_next_prime(s) for s in (250_000, 500_000, 1_000_000)]
    crits = ["wilson", "t1", "t2", "t3", "lemma1"]
    table = bench(sizes, crits, repeats=5)
    by = {(r.n, r.criterion): r.elapsed_ns for r in table}
    for crit in crits:
        for small, big in zip(sizes, sizes[1:]):
            ratio = by[(big, crit)] / by[(small, crit)]
            assert 1.5 <= ratio <= 3.0, (crit, small, big, ratio)
