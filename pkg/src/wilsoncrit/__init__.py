"""Factorial-congruence primality criteria, cross-checked against an exact oracle."""

from .criteria import (
    CRITERIA,
    CriterionTrace,
    T4Form,
    Verdict,
    VerdictKind,
    criterion_t1,
    criterion_t2,
    criterion_t3,
    criterion_t4,
    lemma1_check,
    run_all,
    t4_decompose,
    wilson_test,
)
from .harness import SweepReport, SweepRow, bench, serialize_report, sweep_range, sweep_t4
from .modmath import CheckedInt, factorial_mod, gcd, mul_mod, pow_mod
from .oracle import OracleConfig, is_prime_oracle

__version__ = "0.1.0"

__all__ = [
    "CRITERIA",
    "CheckedInt",
    "CriterionTrace",
    "OracleConfig",
    "SweepReport",
    "SweepRow",
    "T4Form",
    "Verdict",
    "VerdictKind",
    "bench",
    "criterion_t1",
    "criterion_t2",
    "criterion_t3",
    "criterion_t4",
    "factorial_mod",
    "gcd",
    "is_prime_oracle",
    "lemma1_check",
    "mul_mod",
    "pow_mod",
    "run_all",
    "serialize_report",
    "sweep_range",
    "sweep_t4",
    "t4_decompose",
    "wilson_test",
]
