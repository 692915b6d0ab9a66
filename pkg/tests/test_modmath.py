import math
import os
import subprocess
import sys
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wilsoncrit import modmath
from wilsoncrit.modmath import (
    MAX_CHECKED,
    CheckedInt,
    Residue,
    factorial_mod,
    factorial_mod_python,
    gcd,
    mul_mod,
    pow_mod,
)

moduli = st.integers(min_value=2, max_value=MAX_CHECKED)


@st.composite
def residue_pairs(draw):
    m = draw(moduli)
    return draw(st.integers(0, m - 1)), draw(st.integers(0, m - 1)), m


def test_checked_int_bounds():
    assert CheckedInt(0) == 0
    assert CheckedInt(MAX_CHECKED) == MAX_CHECKED
    assert CheckedInt("  42 ") == 42
    with pytest.raises(OverflowError):
        CheckedInt(MAX_CHECKED + 1)
    with pytest.raises(ValueError):
        CheckedInt(-1)
    with pytest.raises(ValueError):
        CheckedInt("twelve")
    with pytest.raises(TypeError):
        CheckedInt(3.0)
    with pytest.raises(TypeError):
        CheckedInt(True)


def test_residue_is_canonical():
    assert Residue.of(-1, 7) == Residue(6, 7)
    with pytest.raises(ValueError):
        Residue(7, 7)
    with pytest.raises(ValueError):
        Residue(0, 1)


@pytest.mark.parametrize("fn", [mul_mod, pow_mod])
def test_rejects_small_modulus(fn):
    for m in (0, 1):
        with pytest.raises(ValueError):
            fn(0, 0, m)
    with pytest.raises(ValueError):
        factorial_mod(3, 1)


def test_mul_mod_examples():
    assert mul_mod(0, 123, 1000) == 0
    assert mul_mod(1, 123, 1000) == 123
    # schoolbook decimal multiplication + digit-serial reduction
    assert mul_mod(3_000_000_019, 3_000_000_019, 2**61 - 1) == 2082471086358918508


@given(residue_pairs())
def test_mul_mod_matches_big_integer(abm):
    a, b, m = abm
    r = mul_mod(a, b, m)
    assert r == (a * b) % m
    assert 0 <= r < m


def test_pow_mod_examples():
    assert pow_mod(5, 0, 7) == 1
    assert pow_mod(5, 1, 7) == 5
    assert pow_mod(2, 10, 1000) == 24


@given(st.integers(0, 200), st.integers(2, 10**6))
def test_pow_mod_matches_repeated_multiplication(e, m):
    a = 3 % m
    acc = 1 % m
    for _ in range(e):
        acc = acc * a % m
    assert pow_mod(a, e, m) == acc


def test_factorial_mod_examples():
    assert factorial_mod(0, 7) == 1
    assert factorial_mod(1, 7) == 1
    assert factorial_mod(4, 5) == 4
    assert factorial_mod(6, 9) == 0
    assert factorial_mod(0, 2) == 1
    assert factorial_mod(5, 3) == 0


def test_gcd_examples():
    assert gcd(0, 5) == 5
    assert gcd(24, 25) == 1
    assert gcd(6, 9) == 3


@settings(max_examples=50)
@given(st.integers(0, 2000), moduli)
def test_factorial_mod_matches_naive(n, m):
    r = factorial_mod(n, m)
    assert r == math.factorial(n) % m
    assert 0 <= r < m


@given(st.integers(1, 3000), st.integers(2, 10**12))
def test_factorial_mod_recurrence(n, m):
    assert factorial_mod(n, m) == mul_mod(factorial_mod(n - 1, m), n % m, m)


@pytest.mark.skipif(not modmath.jit_available(), reason="numba unavailable")
def test_native_and_python_paths_agree():
    rng = random.Random(7)
    for _ in range(200):
        m = rng.randint(2, modmath.NATIVE_MODULUS_LIMIT)
        n = rng.randint(0, min(m - 1, 5000))
        assert modmath._factorial_mod_native(n, m) == factorial_mod_python(n, m)
    # products near the int64 ceiling
    m = modmath.NATIVE_MODULUS_LIMIT
    assert modmath._factorial_mod_native(4000, m) == factorial_mod_python(4000, m)


def test_large_modulus_uses_exact_path():
    m = MAX_CHECKED
    assert factorial_mod(1500, m) == math.factorial(1500) % m


def test_runs_without_jit():
    code = (
        "from wilsoncrit import modmath, sweep_range\n"
        "assert not modmath.jit_available()\n"
        "assert modmath.factorial_mod(28, 29) == 28\n"
        "assert sweep_range(5, 200, ['all']).discrepancies == []\n"
    )
    env = dict(os.environ, WILSONCRIT_NO_JIT="1")
    subprocess.run([sys.executable, "-c", code], env=env, check=True)
