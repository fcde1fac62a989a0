import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from oracles import brute_divisors, brute_f, brute_gpf
from zerosum.arith import (
    DEFAULT_SIEVE_LIMIT,
    Sieve,
    SieveTooSmall,
    divisor_profile,
    divisors,
    f_divisor_sum,
    f_recursion_check,
    f_values_upto,
    factorize,
    greatest_prime_factor,
    p_adic_valuation,
    primes_lemma_scan,
    primes_product_inequality,
    sigma,
    smallest_prime_factor,
)


def test_divisor_profile_12():
    prof = divisor_profile(12)
    assert prof.divisors == (1, 2, 3, 4, 6, 12)
    assert prof.partition == {2: (2, 4), 3: (3, 6, 12)}
    assert prof.deltas == (4, 12)


def test_divisor_profile_small_cases():
    assert divisor_profile(1).divisors == (1,) and divisor_profile(1).partition == {}
    p7 = divisor_profile(7)
    assert p7.partition == {7: (7,)} and p7.deltas == (7,)
    with pytest.raises(ValueError):
        divisor_profile(0)


@pytest.mark.parametrize("n", list(range(1, 400)) + [720, 1001, 2**10, 3**6 * 5])
def test_divisor_profile_invariants(n):
    prof = divisor_profile(n)
    assert list(prof.divisors) == brute_divisors(n)
    blocks = list(prof.partition.values())
    flat = sorted(d for b in blocks for d in b)
    assert flat == [d for d in prof.divisors if d > 1]
    for (q, _), delta in zip(prof.prime_factorization, prof.deltas):
        block = prof.partition[q]
        assert all(d <= delta for d in block)
        assert max(block) == delta
    assert (prof.deltas[-1] if prof.deltas else 1) == n


@pytest.mark.parametrize("n, lo, hi", [(12, 2, 3), (1, 1, 1), (35, 5, 7), (2, 2, 2), (97, 97, 97)])
def test_extreme_prime_factors(n, lo, hi):
    assert smallest_prime_factor(n) == lo
    assert greatest_prime_factor(n) == hi


@pytest.mark.parametrize("n, p, e", [(12, 2, 2), (12, 5, 0), (243, 3, 5), (1, 7, 0)])
def test_valuation(n, p, e):
    assert p_adic_valuation(n, p) == e


def test_valuation_rejects_composite():
    with pytest.raises(ValueError):
        p_adic_valuation(12, 4)


@pytest.mark.parametrize("n, s", [(6, 12), (12, 28), (1, 1), (13, 14), (97, 98)])
def test_sigma(n, s):
    assert sigma(n) == s


def test_sigma_multiplicative():
    rng = random.Random(7)
    checked = 0
    while checked < 300:
        a, b = rng.randint(1, 1000), rng.randint(1, 1000)
        if gcd(a, b) == 1:
            assert sigma(a * b) == sigma(a) * sigma(b)
            checked += 1


def test_sigma_against_divisor_sum():
    for n in range(1, 500):
        assert sigma(n) == sum(brute_divisors(n))


def test_f_examples():
    assert f_divisor_sum(12) == 11
    assert f_divisor_sum(1) == 1
    for p, a in [(2, 5), (3, 3), (7, 2), (11, 1)]:
        assert f_divisor_sum(p**a) == 1 + Fraction(p**a - 1, p - 1)


def test_f_matches_oracle():
    for n in range(1, 300):
        assert f_divisor_sum(n) == brute_f(n)


def test_f_table_matches_exact_values():
    table = f_values_upto(3000)
    for n in range(1, 3001):
        assert table[n] == f_divisor_sum(n)


@pytest.mark.parametrize("m, q, beta", [(4, 3, 1), (1, 2, 1), (6, 5, 2), (30, 7, 3), (8, 3, 2)])
def test_f_recursion(m, q, beta):
    assert f_recursion_check(m, q, beta)


def test_f_recursion_rejects_small_q():
    with pytest.raises(ValueError):
        f_recursion_check(6, 3, 1)
    with pytest.raises(ValueError):
        f_recursion_check(6, 2, 1)


@given(st.integers(1, 2000), st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]), st.integers(1, 3))
def test_f_recursion_property(m, q, beta):
    if q <= greatest_prime_factor(m):
        return
    if m * q**beta > DEFAULT_SIEVE_LIMIT:
        with pytest.raises(SieveTooSmall):
            f_recursion_check(m, q, beta)
    else:
        assert f_recursion_check(m, q, beta)


def test_primes_product_examples():
    assert primes_product_inequality(1) == (Fraction(2), 2, True)
    assert primes_product_inequality(2) == (Fraction(3), 4, True)
    assert primes_product_inequality(4) == (Fraction(35, 8), 10, True)


def test_primes_scan_agrees_with_single_evaluations():
    for ell, bound, holds in primes_lemma_scan(60):
        prod, b2, h2 = primes_product_inequality(ell)
        assert (bound, holds) == (b2, h2)
        assert holds


def test_sieve_limits():
    small = Sieve(100)
    assert small.factorize(97) == [(97, 1)]
    with pytest.raises(SieveTooSmall):
        small.factorize(101)
    with pytest.raises(SieveTooSmall):
        primes_product_inequality(30, small)


@given(st.integers(1, 10**6))
def test_factorize_roundtrip(n):
    prod = 1
    for p, e in factorize(n):
        prod *= p**e
        assert brute_gpf(p) == p if p < 2000 else True
    assert prod == n
    assert divisors(n)[-1] == n
