"""Unit tests for the multiplicative arithmetic toolbox."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coprime_lab import arith


@pytest.fixture(scope="module")
def tables():
    return arith.build_tables(1000)


def test_prime_list(tables):
    small = [int(p) for p in tables.primes if p <= 10]
    assert small == [2, 3, 5, 7]
    assert len([p for p in tables.primes if p <= 1000]) == 168


def test_mobius_values(tables):
    expected = {1: 1, 2: -1, 3: -1, 4: 0, 6: 1, 12: 0, 30: -1, 210: 1}
    for m, mu in expected.items():
        assert arith.mobius_of(m) == mu
        assert int(tables.mobius[m]) == mu


def _mobius_trial(m: int) -> int:
    out, p = 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    if m > 1:
        out = -out
    return out


def test_mobius_table_against_trial_division(tables):
    for m in range(1, 1001):
        assert int(tables.mobius[m]) == _mobius_trial(m), m


def test_factorize(tables):
    assert arith.factorize(360, tables) == ((2, 3), (3, 2), (5, 1))
    assert arith.factorize(1, tables) == ()
    assert arith.factorize(97, tables) == ((97, 1),)


@given(st.integers(min_value=1, max_value=999))
def test_factorize_roundtrip(m):
    tables = arith.build_tables(1000)
    prod = 1
    for p, e in arith.factorize(m, tables):
        prod *= p**e
    assert prod == m


def test_factor_small_matches_tables(tables):
    for m in range(1, 500):
        assert arith.factor_small(m) == arith.factorize(m, tables)


def test_radical_and_prime_divisors():
    assert arith.radical(360) == 30
    assert arith.radical(1) == 1
    assert arith.prime_divisors(60) == (2, 3, 5)
    assert arith.prime_divisors(1) == ()


def test_euler_phi():
    assert [arith.euler_phi(m) for m in (1, 2, 6, 12, 97)] == [1, 1, 2, 4, 96]


def test_jordan_totient_values():
    # phi_r(a) = a^r * prod_{p | a} (1 - p^-r); phi_1 is Euler's totient
    assert arith.jordan_totient(1, 12) == arith.euler_phi(12)
    assert arith.jordan_totient(2, 6) == 24
    assert arith.jordan_totient(3, 2) == 7
    assert arith.jordan_totient(2, 1) == 1


def test_psi_values():
    # Psi_s(a) = a * prod_{p | a} (1 + s/p); Psi_1 is the Dedekind function
    assert arith.psi(1, 6) == 12
    assert arith.psi(2, 3) == 5
    assert arith.psi(0, 10) == 10
    assert arith.psi(3, 1) == 1


@given(
    st.integers(min_value=1, max_value=200),
    st.integers(min_value=1, max_value=200),
    st.integers(min_value=1, max_value=3),
)
@settings(max_examples=200)
def test_multiplicativity_on_coprime_arguments(a, b, r):
    if gcd(a, b) != 1:
        return
    assert arith.jordan_totient(r, a * b) == arith.jordan_totient(r, a) * arith.jordan_totient(r, b)
    assert arith.psi(r, a * b) == arith.psi(r, a) * arith.psi(r, b)
    assert arith.squarefree_divisor_count(a * b) == arith.squarefree_divisor_count(
        a
    ) * arith.squarefree_divisor_count(b)


def test_jordan_and_psi_on_prime_powers():
    for p in (2, 3, 5, 7, 11):
        for e in (1, 2, 3):
            assert arith.jordan_totient(2, p**e) == p ** (2 * e) - p ** (2 * e - 2)
            assert arith.psi(1, p**e) == p**e + p ** (e - 1)


def test_squarefree_divisor_count():
    assert arith.squarefree_divisor_count(12) == 4
    assert arith.squarefree_divisor_count(30) == 8
    assert arith.squarefree_divisor_count(1) == 1


def test_squarefree_divisors_signed():
    assert arith.squarefree_divisors_signed(6) == ((1, 1), (2, -1), (3, -1), (6, 1))
    assert arith.squarefree_divisors_signed(4) == ((1, 1), (2, -1))
    assert arith.squarefree_divisors_signed(1) == ((1, 1),)


def test_toth_factor_values():
    assert arith.toth_factor(2, 1) == 1
    assert arith.toth_factor(2, 2) == Fraction(1, 3)
    assert arith.toth_factor(2, 6) == Fraction(1, 6)
    assert arith.toth_factor(3, 2) == Fraction(1, 4)


def test_toth_factor_prime_closed_form():
    # per prime p the factor is (p-1)/(p-1+r), and it only sees the radical
    for r in (2, 3, 4):
        for p in (2, 3, 5, 7):
            assert arith.toth_factor(r, p) == Fraction(p - 1, p - 1 + r)
            assert arith.toth_factor(r, p * p) == arith.toth_factor(r, p)


def test_table_limit_guard(tables):
    with pytest.raises(ValueError):
        arith.factorize(10**9, tables)
