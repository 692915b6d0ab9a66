"""Factorial-congruence primality criteria.

Every criterion is total: it returns a :class:`Verdict` plus a
:class:`CriterionTrace` holding both sides of the congruence and the named
intermediates used to build the right-hand side.  Inputs that violate a
criterion's hypothesis yield ``OutOfDomain``, never a guess.

Criterion ids: ``wilson``, ``t1`` ((p-3)! congruence), ``t2`` ((p-4)!),
``t3`` ((p-5)!), ``lemma1`` ((m-1)! == 0 for composites) and ``t4``
((p-k)! over the family p = (k-1)!h +/- 1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple

from .modmath import MAX_CHECKED, CheckedInt, factorial_mod

CRITERIA = ("wilson", "t1", "t2", "t3", "lemma1", "t4")

# Residues mod 24 coprime to 24; every prime >= 5 lands here.
ADMISSIBLE_T3_REMAINDERS = frozenset({1, 5, 7, 11, 13, 17, 19, 23})


class VerdictKind(enum.Enum):
    PRIME = "Prime"
    COMPOSITE = "Composite"
    OUT_OF_DOMAIN = "OutOfDomain"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    reason: str = ""

    def __post_init__(self):
        if self.kind is VerdictKind.OUT_OF_DOMAIN and not self.reason:
            raise ValueError("OutOfDomain verdict needs a reason")
        if not self.reason.isprintable():
            raise ValueError(f"reason must be printable text, got {self.reason!r}")

    @property
    def in_domain(self) -> bool:
        return self.kind is not VerdictKind.OUT_OF_DOMAIN

    @property
    def is_prime(self) -> bool:
        return self.kind is VerdictKind.PRIME

    def __str__(self):
        return self.kind.value


PRIME = Verdict(VerdictKind.PRIME)
COMPOSITE = Verdict(VerdictKind.COMPOSITE)


def out_of_domain(reason: str) -> Verdict:
    return Verdict(VerdictKind.OUT_OF_DOMAIN, reason)


@dataclass
class CriterionTrace:
    """Evaluated congruence ``lhs == rhs (mod input)``.

    ``lhs``/``rhs`` are ``None`` when the criterion decided without
    evaluating the congruence (out of domain, or a short-circuit noted in
    ``note``).
    """

    input: int
    lhs: int | None = None
    rhs: int | None = None
    intermediates: dict[str, int] = field(default_factory=dict)
    note: str = ""

    @property
    def congruent(self) -> bool:
        return self.lhs is not None and self.lhs == self.rhs


class Outcome(NamedTuple):
    verdict: Verdict
    trace: CriterionTrace


def _decide(trace: CriterionTrace) -> Outcome:
    return Outcome(PRIME if trace.congruent else COMPOSITE, trace)


def wilson_test(n: int) -> Outcome:
    n = CheckedInt(n)
    trace = CriterionTrace(int(n))
    if n < 2:
        return Outcome(out_of_domain("n < 2"), trace)
    trace.lhs = factorial_mod(n - 1, n)
    trace.rhs = n - 1
    return _decide(trace)


def criterion_t1(p: int) -> Outcome:
    """(p-3)! == (p-1)/2 (mod p), for p >= 3."""
    p = CheckedInt(p)
    trace = CriterionTrace(int(p))
    if p < 3:
        return Outcome(out_of_domain("p < 3"), trace)
    if p % 2 == 0:
        trace.note = "(p-1)/2 is not an integer; even p >= 4 is composite"
        return Outcome(COMPOSITE, trace)
    half = (p - 1) // 2
    trace.intermediates["(p-1)/2"] = half
    trace.lhs = factorial_mod(p - 3, p)
    trace.rhs = half % p
    return _decide(trace)


def criterion_t2(p: int) -> Outcome:
    """(p-4)! == (-1)^(floor(p/3)+1) * floor((p+1)/6) (mod p), for p > 4."""
    p = CheckedInt(p)
    trace = CriterionTrace(int(p))
    if p <= 4:
        return Outcome(out_of_domain("p <= 4"), trace)
    third = p // 3
    magnitude = (p + 1) // 6
    sign = 1 if (third + 1) % 2 == 0 else -1
    trace.intermediates.update(
        {"floor(p/3)": third, "floor((p+1)/6)": magnitude, "sign": sign}
    )
    trace.lhs = factorial_mod(p - 4, p)
    trace.rhs = sign * magnitude % p
    return _decide(trace)


def criterion_t3(p: int) -> Outcome:
    """(p-5)! == r*h + (r^2-1)/24 (mod p) with p = 24h + r, for p >= 5."""
    p = CheckedInt(p)
    trace = CriterionTrace(int(p))
    if p < 5:
        return Outcome(out_of_domain("p < 5"), trace)
    h, r = divmod(int(p), 24)
    trace.intermediates.update({"h": h, "r": r})
    if (r * r - 1) % 24:
        # gcd(r, 24) > 1 forces gcd(p, 24) > 1, and p >= 5.
        trace.note = "shares a factor 2 or 3 with 24"
        return Outcome(COMPOSITE, trace)
    quotient = (r * r - 1) // 24
    trace.intermediates["(r^2-1)/24"] = quotient
    trace.lhs = factorial_mod(p - 5, p)
    trace.rhs = (r * h + quotient) % p
    return _decide(trace)


def lemma1_check(m: int) -> Outcome:
    """(m-1)! == 0 (mod m) iff m is composite, for m > 4.

    The trace records the congruence against 0, so here ``congruent`` means
    Composite rather than Prime.
    """
    m = CheckedInt(m)
    trace = CriterionTrace(int(m))
    if m <= 4:
        return Outcome(out_of_domain("m <= 4"), trace)
    trace.lhs = factorial_mod(m - 1, m)
    trace.rhs = 0
    return Outcome(COMPOSITE if trace.congruent else PRIME, trace)


@dataclass(frozen=True, order=True)
class T4Form:
    """``p = (k-1)! * h + epsilon`` with ``k > 2``, ``h >= 1``, ``epsilon = +/-1``.

    The degenerate form (3, 1, -1) giving p = 1 is constructible so that
    :func:`criterion_t4` can report it as out of domain.
    """

    k: int
    h: int
    epsilon: int

    def __post_init__(self):
        if self.k <= 2:
            raise ValueError(f"k must exceed 2, got {self.k}")
        if self.h < 1:
            raise ValueError(f"h must be >= 1, got {self.h}")
        if self.epsilon not in (-1, 1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon}")

    @property
    def p(self) -> int:
        """Reconstructed integer; may exceed the checked range."""
        return math.factorial(self.k - 1) * self.h + self.epsilon

    @property
    def label(self) -> str:
        return f"t4[k={self.k};h={self.h};e={self.epsilon:+d}]"

    @classmethod
    def from_label(cls, label: str) -> T4Form:
        if not (label.startswith("t4[") and label.endswith("]")):
            raise ValueError(f"not a t4 label: {label!r}")
        parts = dict(item.split("=", 1) for item in label[3:-1].split(";"))
        return cls(int(parts["k"]), int(parts["h"]), int(parts["e"]))


def case_table_sign(form: T4Form) -> int:
    """Sign s with (p-k)! == s*h for prime p.

    +1 when (epsilon = -1 and k even) or (epsilon = +1 and k odd), i.e.
    s = (-epsilon) * (-1)^k.
    """
    return -form.epsilon * (1 if form.k % 2 == 0 else -1)


def compact_formula_sign(form: T4Form) -> int:
    """Sign from the closed form (-1)^(h + floor(p/h) + 1).

    Disagrees with :func:`case_table_sign` on e.g. (3, 2, +1): 2! mod 5 is
    +2 while the exponent 2 + 2 + 1 is odd.  Recorded, never used to decide.
    """
    exponent = form.h + form.p // form.h + 1
    return 1 if exponent % 2 == 0 else -1


def criterion_t4(form: T4Form) -> Outcome:
    """(p-k)! == case_table_sign * h (mod p) for p = (k-1)!h + epsilon."""
    p = form.p
    if p > MAX_CHECKED:
        raise OverflowError(f"(k-1)!*h + e = {p} exceeds 2**63 - 1")
    p = CheckedInt(p)
    sign = case_table_sign(form)
    compact = compact_formula_sign(form)
    trace = CriterionTrace(
        int(p),
        intermediates={
            "k": form.k,
            "h": form.h,
            "epsilon": form.epsilon,
            "sign": sign,
            "compact_sign": compact,
            "compact_agrees": int(compact == sign),
        },
    )
    if p < 2 or p <= form.k:
        return Outcome(out_of_domain("p <= k" if p >= 2 else "p < 2"), trace)
    trace.lhs = factorial_mod(p - form.k, p)
    trace.rhs = sign * form.h % p
    return _decide(trace)


def t4_decompose(p: int) -> list[T4Form]:
    """Every form (k, h, epsilon) with (k-1)!*h + epsilon == p, sorted by (k, epsilon)."""
    p = CheckedInt(p)
    if p < 2:
        raise ValueError("p must be >= 2")
    forms = []
    k = 3
    fact = 2  # (k-1)!
    while fact <= p + 1:
        for eps in (-1, 1):
            q, rem = divmod(p - eps, fact)
            if rem == 0 and q >= 1:
                forms.append(T4Form(k, q, eps))
        k += 1
        fact *= k - 1
    return forms


_SINGLE: dict[str, Callable[[int], Outcome]] = {
    "wilson": wilson_test,
    "t1": criterion_t1,
    "t2": criterion_t2,
    "t3": criterion_t3,
    "lemma1": lemma1_check,
}


def evaluate(criterion: str, n: int) -> list[tuple[str, Outcome]]:
    """Apply one criterion id to n; ``t4`` expands to every decomposition."""
    if criterion == "t4":
        if n < 2:
            return [("t4", Outcome(out_of_domain("n < 2"), CriterionTrace(int(n))))]
        forms = t4_decompose(n)
        if not forms:
            trace = CriterionTrace(int(n))
            return [("t4", Outcome(out_of_domain("no (k-1)!h+/-1 form"), trace))]
        return [(f.label, criterion_t4(f)) for f in forms]
    try:
        fn = _SINGLE[criterion]
    except KeyError:
        raise ValueError(f"unknown criterion {criterion!r}") from None
    return [(criterion, fn(n))]


@dataclass(frozen=True)
class Disagreement:
    n: int
    prime_says: tuple[str, ...]
    composite_says: tuple[str, ...]


@dataclass
class RunAll:
    """Verdicts of every criterion on one integer, plus any disagreement."""

    n: int
    entries: list[tuple[str, Verdict, CriterionTrace]]
    disagreement: Disagreement | None

    def __iter__(self) -> Iterator[tuple[str, Verdict, CriterionTrace]]:
        return iter(self.entries)

    @property
    def consistent(self) -> bool:
        return self.disagreement is None


def run_all(n: int, criteria: tuple[str, ...] = CRITERIA) -> RunAll:
    n = CheckedInt(n)
    entries = []
    for crit in criteria:
        for label, (verdict, trace) in evaluate(crit, n):
            entries.append((label, verdict, trace))
    primes = tuple(c for c, v, _ in entries if v.kind is VerdictKind.PRIME)
    composites = tuple(c for c, v, _ in entries if v.kind is VerdictKind.COMPOSITE)
    disagreement = Disagreement(int(n), primes, composites) if primes and composites else None
    return RunAll(int(n), entries, disagreement)
