"""Exact modular arithmetic: products, powers and factorials modulo m.

Python integers never wrap, so every product here is exact for any modulus
the package accepts (``m <= 2**63 - 1``).  ``factorial_mod`` additionally has
a JIT-compiled fast path for moduli small enough that ``acc * i`` fits in a
signed 64-bit register; larger moduli take the big-integer path.  Both paths
reduce after every multiplication.

Montgomery/Barrett reduction is deliberately absent: the O(n) factorial loop
dominates runtime.  ``_factorial_mod_native`` is the place to add it.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

MAX_CHECKED = 2**63 - 1

# Largest m with (m - 1)**2 <= 2**63 - 1, so acc * i cannot overflow int64.
NATIVE_MODULUS_LIMIT = 3_037_000_499


class CheckedInt(int):
    """A natural number in ``[0, 2**63 - 1]``.

    Construction fails loudly (``OverflowError``/``ValueError``) for values
    outside that range, and ``TypeError`` for non-integers (bools included).
    """

    def __new__(cls, value):
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, str):
                try:
                    value = int(value.strip(), 10)
                except ValueError:
                    raise ValueError(f"not an integer: {value!r}") from None
            else:
                raise TypeError(f"expected int, got {type(value).__name__}")
        if value < 0:
            raise ValueError(f"{value} is negative")
        if value > MAX_CHECKED:
            raise OverflowError(f"{value} exceeds 2**63 - 1")
        return super().__new__(cls, value)

    def __repr__(self):
        return f"CheckedInt({int(self)})"


@dataclass(frozen=True)
class Residue:
    """Canonical representative of a congruence class, ``0 <= value < modulus``."""

    value: int
    modulus: int

    def __post_init__(self):
        _check_modulus(self.modulus)
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not reduced mod {self.modulus}")

    @classmethod
    def of(cls, value: int, modulus: int) -> Residue:
        """Reduce any integer (negative included) to its canonical residue."""
        _check_modulus(modulus)
        return cls(value % modulus, modulus)


def _check_modulus(m: int) -> None:
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if m > MAX_CHECKED:
        raise OverflowError(f"modulus {m} exceeds 2**63 - 1")


def mul_mod(a: int, b: int, m: int) -> int:
    """Return ``(a * b) mod m`` for residues ``a, b < m``."""
    _check_modulus(m)
    return a * b % m


def pow_mod(a: int, e: int, m: int) -> int:
    """Return ``a**e mod m``; ``pow_mod(a, 0, m) == 1 % m``."""
    _check_modulus(m)
    if e < 0:
        raise ValueError("negative exponent")
    # CPython's three-argument pow is left-to-right square-and-multiply.
    return pow(a, e, m)


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def factorial_mod_python(n: int, m: int) -> int:
    """Big-integer reference path of :func:`factorial_mod` (any valid m)."""
    acc = 1 % m
    for i in range(2, n + 1):
        acc = acc * i % m
    return acc


def _load_native():
    if os.environ.get("WILSONCRIT_NO_JIT"):
        return None
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return None

    @njit(cache=True, nogil=True)
    def _factorial_mod_native(n, m):
        acc = 1 % m
        for i in range(2, n + 1):
            acc = acc * i % m
        return acc

    return _factorial_mod_native


_factorial_mod_native = _load_native()


def factorial_mod(n: int, m: int) -> int:
    """Return ``n! mod m`` as the running product ``1*2*...*n`` reduced each step.

    Costs ``O(n)`` modular multiplications; there is no sub-linear shortcut
    apart from ``n >= m``, where ``m`` itself divides ``n!`` and the result
    is 0.  ``factorial_mod(0, m) == factorial_mod(1, m) == 1 % m``.
    """
    _check_modulus(m)
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    if n >= m:
        return 0
    if _factorial_mod_native is not None and m <= NATIVE_MODULUS_LIMIT:
        return int(_factorial_mod_native(int(n), int(m)))
    return factorial_mod_python(n, m)


def jit_available() -> bool:
    return _factorial_mod_native is not None


def warm_up() -> None:
    """Trigger JIT compilation (or cache load) so it stays out of timings."""
    factorial_mod(10, 11)
