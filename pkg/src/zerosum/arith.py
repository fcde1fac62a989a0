"""Divisor-lattice arithmetic: prime factors, valuations, divisor sums.

Factorization goes through a smallest-prime-factor table.  Inputs larger
than the table are rejected so results never depend on probabilistic
factoring.
"""

from __future__ import annotations

import csv
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

DEFAULT_SIEVE_LIMIT = 10**6


class SieveTooSmall(ValueError):
    pass


class Sieve:
    """Smallest-prime-factor table on [0, limit]."""

    def __init__(self, limit: int = DEFAULT_SIEVE_LIMIT):
        if limit < 2:
            raise ValueError("sieve limit must be at least 2")
        self.limit = limit
        spf = np.zeros(limit + 1, dtype=np.int64)
        for p in range(2, int(limit**0.5) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        rest = np.nonzero(spf == 0)[0]
        spf[rest] = rest
        self.spf = spf
        self._primes = None

    @property
    def primes(self) -> np.ndarray:
        if self._primes is None:
            idx = np.arange(self.limit + 1)
            self._primes = idx[(self.spf == idx) & (idx >= 2)]
        return self._primes

    def check(self, n: int) -> None:
        if n > self.limit:
            raise SieveTooSmall(f"{n} exceeds the sieve limit {self.limit}")

    def factorize(self, n: int) -> list[tuple[int, int]]:
        if n < 1:
            raise ValueError(f"cannot factor {n}")
        self.check(n)
        out: list[tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def is_prime(self, p: int) -> bool:
        if p < 2:
            return False
        self.check(p)
        return int(self.spf[p]) == p

    def greatest_prime_factor_table(self) -> np.ndarray:
        """P+(n) for every n in the table, with P+(1) = 1."""
        gpf = np.ones(self.limit + 1, dtype=np.int64)
        for p in self.primes:
            gpf[p :: p] = p
        return gpf


_default_sieve: Sieve | None = None


def default_sieve() -> Sieve:
    global _default_sieve
    if _default_sieve is None:
        _default_sieve = Sieve(DEFAULT_SIEVE_LIMIT)
    return _default_sieve


def factorize(n: int, sieve: Sieve | None = None) -> list[tuple[int, int]]:
    """Prime factorization as (prime, exponent) pairs, primes increasing."""
    return (sieve or default_sieve()).factorize(n)


def is_prime(p: int, sieve: Sieve | None = None) -> bool:
    return (sieve or default_sieve()).is_prime(p)


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def smallest_prime_factor(n: int) -> int:
    """P-(n), with P-(1) = 1."""
    if n < 1:
        raise ValueError("n must be positive")
    fac = factorize(n)
    return fac[0][0] if fac else 1


def greatest_prime_factor(n: int) -> int:
    """P+(n), with P+(1) = 1."""
    if n < 1:
        raise ValueError("n must be positive")
    fac = factorize(n)
    return fac[-1][0] if fac else 1


def p_adic_valuation(n: int, p: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def sigma(n: int) -> int:
    """Sum of the positive divisors of n."""
    total = 1
    for p, e in factorize(n):
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def f_divisor_sum(n: int) -> Fraction:
    """f(n) = sum over d | n of d / P+(d)."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum((Fraction(d, greatest_prime_factor(d)) for d in divisors(n)), Fraction(0))


def f_recursion_check(m: int, q: int, beta: int) -> bool:
    """Check f(m q^beta) = f(m) + sigma(m) (q^beta - 1)/(q - 1) exactly.

    Both sides are evaluated independently from the divisor sum.
    """
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q <= greatest_prime_factor(m):
        raise ValueError(f"q={q} must exceed the largest prime factor of m={m}")
    if beta < 1:
        raise ValueError("beta must be at least 1")
    lhs = f_divisor_sum(m * q**beta)
    rhs = f_divisor_sum(m) + sigma(m) * Fraction(q**beta - 1, q - 1)
    return lhs == rhs


def f_values_upto(limit: int, sieve: Sieve | None = None) -> np.ndarray:
    """Array F with F[n] = f(n) for 1 <= n <= limit (F[0] unused).

    Every term d / P+(d) is an integer, so f(n) is an integer and the
    table is exact in int64.
    """
    sv = sieve or (default_sieve() if limit <= DEFAULT_SIEVE_LIMIT else Sieve(limit))
    sv.check(limit)
    gpf = sv.greatest_prime_factor_table()[: limit + 1]
    h = np.arange(limit + 1, dtype=np.int64) // gpf
    f = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        f[d::d] += h[d]
    return f


def f_scan_rows(lo: int, hi: int) -> Iterator[tuple[int, int, int, int]]:
    """Rows (n, numerator, denominator, sign(n - f(n))) for lo <= n <= hi."""
    f = f_values_upto(hi)
    for n in range(max(lo, 1), hi + 1):
        v = int(f[n])
        yield n, v, 1, (n > v) - (n < v)


def write_f_scan_csv(lo: int, hi: int, out=None) -> int:
    """Write the f(n) scan as CSV; return the number of rows with f(n) > n."""
    writer = csv.writer(out or sys.stdout)
    writer.writerow(["n", "f_num", "f_den", "sign_n_minus_f"])
    bad = 0
    for row in f_scan_rows(lo, hi):
        writer.writerow(row)
        bad += row[3] < 0
    return bad


def nth_primes(count: int, sieve: Sieve | None = None) -> list[int]:
    sv = sieve or default_sieve()
    ps = sv.primes
    if len(ps) < count:
        raise SieveTooSmall(f"sieve up to {sv.limit} holds only {len(ps)} primes")
    return [int(p) for p in ps[:count]]


def primes_product_inequality(ell: int, sieve: Sieve | None = None) -> tuple[Fraction, int, bool]:
    """prod_{i<=ell} (1 + 1/(p_i - 1)) against p_{ell+1} - 1."""
    if ell < 1:
        raise ValueError("ell must be at least 1")
    ps = nth_primes(ell + 1, sieve)
    num = den = 1
    for p in ps[:ell]:
        num *= p
        den *= p - 1
    bound = ps[ell] - 1
    return Fraction(num, den), bound, num <= bound * den


def primes_lemma_scan(max_ell: int, sieve: Sieve | None = None) -> Iterator[tuple[int, int, bool]]:
    """Yield (ell, p_{ell+1} - 1, holds) for ell = 1..max_ell.

    The product is carried as an unreduced numerator/denominator pair so
    the scan stays linear in the size of the numbers.
    """
    ps = nth_primes(max_ell + 1, sieve)
    num = den = 1
    for ell in range(1, max_ell + 1):
        p = ps[ell - 1]
        num *= p
        den *= p - 1
        bound = ps[ell] - 1
        yield ell, bound, num <= bound * den


@dataclass(frozen=True)
class DivisorProfile:
    n: int
    divisors: tuple[int, ...]
    prime_factorization: tuple[tuple[int, int], ...]
    partition: dict = field(hash=False, compare=False)
    deltas: tuple[int, ...]

    def block(self, i: int) -> tuple[int, ...]:
        """A_i for 1-based i."""
        return self.partition[self.prime_factorization[i - 1][0]]


def divisor_profile(n: int) -> DivisorProfile:
    if n < 1:
        raise ValueError("n must be positive")
    fac = tuple(factorize(n))
    divs = tuple(divisors(n))
    part = {q: tuple(d for d in divs if d > 1 and greatest_prime_factor(d) == q) for q, _ in fac}
    deltas = []
    acc = 1
    for q, a in fac:
        acc *= q**a
        deltas.append(acc)
    return DivisorProfile(n, divs, fac, part, tuple(deltas))
