"""Exact values of D, eta, t, rho and eta_(d',d) on small groups."""

from __future__ import annotations

from ..groups import FiniteAbelianGroup, order_dividing_subgroup
from ..sequences import (
    GSequence,
    has_pair_subsequence,
    has_short_zero_sum,
    has_tiny_zero_sum,
    has_zero_sum_subsequence,
)
from .engine import (
    AvoidanceProblem,
    ExactResult,
    Predicate,
    SearchConfig,
    SearchObjective,
    max_avoiding,
)

__all__ = [
    "AvoidanceProblem",
    "ExactResult",
    "Predicate",
    "SearchConfig",
    "SearchObjective",
    "max_avoiding",
    "davenport_exact",
    "eta_exact",
    "t_exact",
    "rho_exact",
    "eta_pair_exact",
    "violates",
    "verify_result",
]


def davenport_exact(G: FiniteAbelianGroup, config: SearchConfig | None = None) -> ExactResult:
    return max_avoiding(AvoidanceProblem(G, Predicate.ZERO_SUM), config)


def eta_exact(G: FiniteAbelianGroup, config: SearchConfig | None = None) -> ExactResult:
    return max_avoiding(AvoidanceProblem(G, Predicate.SHORT_ZERO_SUM), config)


def t_exact(G: FiniteAbelianGroup, config: SearchConfig | None = None) -> ExactResult:
    return max_avoiding(AvoidanceProblem(G, Predicate.TINY_ZERO_SUM), config)


def rho_exact(G: FiniteAbelianGroup, config: SearchConfig | None = None, value_cap: int | None = None) -> ExactResult:
    """rho(G) as an exact fraction.

    ``value_cap`` is an optional known upper bound on k(S) * exp(G) for
    avoiding S; it only allows the search to stop once reached.
    """
    problem = AvoidanceProblem(
        G, Predicate.TINY_ZERO_SUM, SearchObjective.MAX_SCALED_CROSS, value_cap=value_cap
    )
    return max_avoiding(problem, config)


def eta_pair_exact(G: FiniteAbelianGroup, d_prime: int, d: int, config: SearchConfig | None = None) -> ExactResult:
    return max_avoiding(AvoidanceProblem(G, Predicate.PAIR, d_prime=d_prime, d=d), config)


def violates(problem: AvoidanceProblem, S: GSequence) -> bool:
    """Does S contain a forbidden subsequence for the problem's predicate?"""
    p = problem.predicate
    if p is Predicate.ZERO_SUM:
        return has_zero_sum_subsequence(S) is not None
    if p is Predicate.SHORT_ZERO_SUM:
        return has_short_zero_sum(S) is not None
    if p is Predicate.TINY_ZERO_SUM:
        return has_tiny_zero_sum(S) is not None
    return has_pair_subsequence(S, problem.d_prime, problem.d) is not None


def verify_result(result: ExactResult) -> list[str]:
    """Independent checks of a result; returns a list of failures.

    The witness must avoid the predicate, its objective must match the
    value, and (for exact results) adding any admissible element must
    create a forbidden subsequence, since otherwise a better sequence
    would exist.
    """
    problem = result.problem
    G = problem.group
    S = result.extremal_witness
    errors = []
    if violates(problem, S):
        errors.append("witness contains a forbidden subsequence")
    if problem.objective is SearchObjective.MAX_LENGTH:
        if result.value != S.length + 1:
            errors.append(f"value {result.value} != |witness| + 1 = {S.length + 1}")
    else:
        from ..sequences import cross_number

        if cross_number(S).value != result.value:
            errors.append("witness cross number differs from the value")
    if result.exact:
        if problem.predicate is Predicate.PAIR:
            H, _ = order_dividing_subgroup(G, problem.d)
            pool = [g for g in G.elements if problem.d % _order_of(G, g) == 0]
        else:
            pool = list(G.elements)
        for g in pool:
            T = S + GSequence(G, ((g, 1),))
            if not violates(problem, T):
                errors.append(f"witness extends by {g} without violating")
                break
    return errors


def _order_of(G, g):
    from ..groups import element_order

    return element_order(G, g)
