"""Constructive witness finding.

* tiny zero-sum subsequences (plain DP),
* the Erdos-Lemke divisor problem, solved as a tiny zero-sum search in
  C_n: gcd(a, n) = n / ord(a mod n), so the gcd budget of a subset is n
  times the cross number of its image,
* extraction of disjoint families inside one order stratum, and the
  stratified finder that recombines family sums over a p-subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Sequence

import numpy as np
from numba import njit

from .arith import divisor_profile, factorize, greatest_prime_factor, p_adic_valuation
from .bounds import ConstantRegistry, eta_pair_upper
from .groups import FiniteAbelianGroup, GroupElement, element_order
from .sequences import (
    GSequence,
    ItemDP,
    cross_number,
    has_pair_subsequence,
    has_tiny_zero_sum,
    order_stratum,
    sequence_sum,
)


class PreconditionViolation(ValueError):
    pass


def find_tiny_zero_sum(S: GSequence) -> GSequence | None:
    return has_tiny_zero_sum(S)


# Erdos-Lemke


@dataclass(frozen=True)
class LemkeSolution:
    indices: tuple[int, ...]  # 1-based
    sum_check: int
    gcd_budget: int
    n: int

    @property
    def valid(self) -> bool:
        return bool(self.indices) and self.sum_check % self.n == 0 and self.gcd_budget <= self.n

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "indices": list(self.indices),
            "sum": self.sum_check,
            "gcd_budget": self.gcd_budget,
        }


def _lemke_solution(values, n, idx) -> LemkeSolution:
    idx = tuple(sorted(idx))
    return LemkeSolution(
        tuple(i + 1 for i in idx),
        sum(values[i] for i in idx),
        sum(gcd(values[i] % n, n) for i in idx),
        n,
    )


def solve_erdos_lemke(values: Sequence[int], n: int) -> LemkeSolution:
    """Indices I with n | sum a_i and sum gcd(a_i, n) <= n over I."""
    values = [int(a) for a in values]
    if n < 1:
        raise ValueError("n must be positive")
    if len(values) != n:
        raise ValueError(f"expected {n} values, got {len(values)}")
    C = FiniteAbelianGroup((n,)) if n > 1 else FiniteAbelianGroup(())
    if n == 1:
        return _lemke_solution(values, n, [0])
    items = [a % n for a in values]
    weights = [gcd(a, n) for a in items]  # gcd(0, n) = n
    dp = ItemDP(C, items, weights, stop=lambda layer: layer[0] <= n)
    if dp.final[0] > n:
        raise AssertionError("no solution found; the DP is defective")
    return _lemke_solution(values, n, dp.reconstruct(0))


@njit(cache=True)
def _lemke_batch_kernel(vals, n):
    m = vals.shape[0]
    out = np.zeros((m, n), dtype=np.bool_)
    big = 1 << 40
    layers = np.empty((n, n), dtype=np.int64)
    w = np.empty(n, dtype=np.int64)
    a = np.empty(n, dtype=np.int64)
    for row in range(m):
        zero = -1
        for i in range(n):
            a[i] = vals[row, i] % n
            x, y = a[i], n
            while x:
                x, y = y % x, x
            w[i] = y
            if a[i] == 0 and zero < 0:
                zero = i
        if zero >= 0:
            out[row, zero] = True
            continue
        stop = -1
        for i in range(n):
            for s in range(n):
                layers[i, s] = layers[i - 1, s] if i > 0 else big
            for s in range(n):
                prev = layers[i - 1, s] if i > 0 else big
                if prev < big:
                    t = (s + a[i]) % n
                    if prev + w[i] < layers[i, t]:
                        layers[i, t] = prev + w[i]
            if w[i] < layers[i, a[i]]:
                layers[i, a[i]] = w[i]
            if layers[i, 0] <= n:
                stop = i
                break
        if stop < 0:
            out[row, 0] = True  # flagged by the caller's validator
            continue
        s = 0
        i = stop
        target = layers[i, 0]
        while True:
            before = layers[i - 1, s] if i > 0 else big
            if before == target:
                i -= 1
                continue
            out[row, i] = True
            if s == a[i] and target == w[i]:
                break
            s = (s - a[i]) % n
            target -= w[i]
            i -= 1
    return out


def solve_erdos_lemke_batch(values: np.ndarray, n: int) -> np.ndarray:
    """Solve many instances at once; returns a boolean index mask per row."""
    values = np.ascontiguousarray(values, dtype=np.int64)
    if values.ndim != 2 or values.shape[1] != n:
        raise ValueError(f"expected an array of shape (m, {n})")
    if n == 1:
        return np.ones(values.shape, dtype=bool)
    return _lemke_batch_kernel(values, n)


# pair extraction and the stratified finder


def extract_pair_subsequence(S: GSequence, d_prime: int, d: int) -> GSequence:
    W = has_pair_subsequence(S, d_prime, d)
    if W is None:
        raise PreconditionViolation(
            f"no subsequence of length <= {d_prime} with sum in G_{d // d_prime}; "
            f"the length precondition was not met (|S| = {S.length})"
        )
    return W


@dataclass
class ExtractionFamily:
    d: int
    q: int
    d_prime: int
    eta_value: int
    k_d: int
    families: list[GSequence] = field(default_factory=list)


@lru_cache(maxsize=None)
def _eta_pair_cached(factors: tuple[int, ...], d_prime: int, d: int, budget: int) -> int | None:
    from .exact import SearchConfig, eta_pair_exact

    res = eta_pair_exact(FiniteAbelianGroup(factors), d_prime, d, SearchConfig(budget=budget))
    return res.value if res.exact else None


def pair_value(G: FiniteAbelianGroup, d_prime: int, d: int, source: str = "exact",
               registry: ConstantRegistry | None = None, budget: int = 10**7) -> int | None:
    """eta_(d',d)(G), exactly when possible, else the rank-constant bound.

    Returns None when neither is available.
    """
    if d_prime == 1:
        return 1
    if source == "exact":
        v = _eta_pair_cached(G.invariant_factors, d_prime, d, budget)
        if v is not None:
            return v
    registry = registry or ConstantRegistry()
    if G.rank == 0 or registry.has(G.rank):
        return eta_pair_upper(G, d_prime, d, registry)
    return None


def stratum_parameters(d: int) -> tuple[int, int, int]:
    """(q, q^nu, d') with q = P+(d), nu = nu_q(d), d' = d / q^nu."""
    q = greatest_prime_factor(d)
    qn = q ** p_adic_valuation(d, q)
    return q, qn, d // qn


def extract_disjoint_families(S: GSequence, d: int, *, source: str = "exact",
                              registry: ConstantRegistry | None = None,
                              eta_value: int | None = None) -> ExtractionFamily:
    """Greedily pull k_d disjoint families out of S_d.

    Each family has length at most d' = d / q^nu and sum in G_{q^nu}, so
    its cross number is at most d'/d = 1/q^nu.  k_d is the least k with
    |S_d| < k d' + eta_(d',d)(G).
    """
    G = S.group
    if d <= 1 or G.exponent % d:
        raise ValueError(f"need d > 1 dividing exp(G); got {d}")
    q, qn, dp = stratum_parameters(d)
    eta = eta_value if eta_value is not None else pair_value(G, dp, d, source, registry)
    if eta is None:
        raise PreconditionViolation(f"no value for eta_({dp},{d})({G}) and no constant for rank {G.rank}")
    rest = order_stratum(S, d)
    size = rest.length
    k_d = 0 if size < eta else (size - eta) // dp + 1
    fam = ExtractionFamily(d, q, dp, eta, k_d)
    for _ in range(k_d):
        W = extract_pair_subsequence(rest, dp, d)
        fam.families.append(W)
        rest = rest - W
    return fam


@dataclass
class PipelineOutcome:
    witness: GSequence | None
    route: str  # identity, p-group, pipeline, fallback, none
    prime: int | None = None
    families: list[GSequence] = field(default_factory=list)
    derived_witness: list[int] = field(default_factory=list)


def run_pipeline(S: GSequence, *, source: str = "exact", registry: ConstantRegistry | None = None) -> PipelineOutcome:
    """Stratified tiny zero-sum search with a plain DP fallback.

    For each prime q of exp(G), families are extracted from every stratum
    S_d with P+(d) = q.  Their sums lie in the q-subgroup G_{q^a}; a tiny
    zero-sum among those sums expands to a tiny zero-sum of S because a
    family's cross number is at most the cross number of its sum.
    """
    G = S.group
    zero = G.identity
    if S.count(zero):
        return PipelineOutcome(GSequence(G, ((zero, 1),)), "identity")
    prof = divisor_profile(G.exponent)
    if len(prof.prime_factorization) <= 1:
        return PipelineOutcome(has_tiny_zero_sum(S), "p-group")
    for q, _ in prof.prime_factorization:
        families: list[GSequence] = []
        try:
            for d in prof.partition[q]:
                families.extend(extract_disjoint_families(S, d, source=source, registry=registry).families)
        except PreconditionViolation:
            continue
        if not families:
            continue
        sums = [G.index(sequence_sum(F)) for F in families]
        n = G.exponent
        weights = [n // G.orders[s] for s in sums]
        dp = ItemDP(G, sums, weights, stop=lambda layer: layer[0] <= n)
        if dp.final[0] <= n:
            J = dp.reconstruct(0)
            W = GSequence.empty(G)
            for j in J:
                W = W + families[j]
            return PipelineOutcome(W, "pipeline", q, families, J)
    W = has_tiny_zero_sum(S)
    return PipelineOutcome(W, "fallback" if W is not None else "none")


def pipeline_tiny_finder(S: GSequence, *, source: str = "exact", registry: ConstantRegistry | None = None) -> GSequence | None:
    return run_pipeline(S, source=source, registry=registry).witness
