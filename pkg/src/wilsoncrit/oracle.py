"""Ground-truth primality, independent of every factorial congruence.

Two tiers: plain trial division up to sqrt(n) for n below
``trial_division_bound``, then a strong-pseudoprime (Miller-Rabin) test over
the first twelve primes as bases.  That base set has no strong pseudoprime
below 3.18e23, so the answer is exact for the whole 63-bit range.
"""

from __future__ import annotations

from dataclasses import dataclass

from .modmath import CheckedInt, pow_mod

DETERMINISTIC_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class OracleConfig:
    trial_division_bound: int = 10**7
    witness_set: tuple[int, ...] = DETERMINISTIC_WITNESSES

    def __post_init__(self):
        if self.witness_set != DETERMINISTIC_WITNESSES:
            raise ValueError("witness_set is fixed to the deterministic 64-bit base set")
        if self.trial_division_bound < 0:
            raise ValueError("trial_division_bound must be non-negative")


DEFAULT_CONFIG = OracleConfig()


def trial_division(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    d = 5
    while d * d <= n:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def is_strong_probable_prime(n: int, base: int) -> bool:
    """Strong-pseudoprime test of odd ``n > 2`` to one base."""
    a = base % n
    if a == 0:
        # base is a multiple of n; says nothing about n
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow_mod(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime_oracle(n: int, cfg: OracleConfig = DEFAULT_CONFIG) -> bool:
    n = CheckedInt(n)
    if n < cfg.trial_division_bound:
        return trial_division(n)
    if n < 2:
        return False
    for q in cfg.witness_set:
        if n == q:
            return True
        if n % q == 0:
            return False
    return all(is_strong_probable_prime(n, a) for a in cfg.witness_set)
