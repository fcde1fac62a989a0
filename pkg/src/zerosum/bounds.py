"""Closed-form bounds on eta, t, rho and D, and a per-group report that
checks them against exact values.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Mapping

from .arith import (
    divisors,
    factorize,
    greatest_prime_factor,
    is_prime,
    p_adic_valuation,
    smallest_prime_factor,
)
from .groups import FiniteAbelianGroup
from .report import rational_json
from .sequences import check_divisor_pair


class MissingConstant(KeyError):
    def __str__(self):
        return self.args[0]


class Provenance(enum.Enum):
    PROVEN = "proven"
    CONFIGURED = "configured"


PROVEN_CONSTANTS = {1: Fraction(1), 2: Fraction(3)}


class ConstantRegistry:
    """Rank -> c_r.  Ranks 1 and 2 are preloaded; others must be configured."""

    def __init__(self, overrides: Mapping[int, Fraction | int | str] | None = None):
        self._values: dict[int, Fraction] = dict(PROVEN_CONSTANTS)
        self._prov: dict[int, Provenance] = {r: Provenance.PROVEN for r in PROVEN_CONSTANTS}
        for r, v in (overrides or {}).items():
            self.set(r, v)

    def set(self, rank: int, value) -> None:
        v = Fraction(value)
        if rank < 1:
            raise ValueError("rank must be at least 1")
        if v <= 0:
            raise ValueError("c_r must be positive")
        floor = PROVEN_CONSTANTS.get(rank)
        if floor is not None and v < floor:
            raise ValueError(f"c_{rank} cannot be set below the proven value {floor}")
        self._values[rank] = v
        if floor is None or v != floor:
            self._prov[rank] = Provenance.CONFIGURED

    def get(self, rank: int) -> Fraction:
        if rank not in self._values:
            raise MissingConstant(f"no constant c_{rank} configured for rank {rank}")
        return self._values[rank]

    def provenance(self, rank: int) -> Provenance:
        self.get(rank)
        return self._prov[rank]

    def has(self, rank: int) -> bool:
        return rank in self._values

    def items(self):
        return sorted(self._values.items())


def _ceil(x: Fraction) -> int:
    return math.ceil(Fraction(x))


def _rank_constant(registry: ConstantRegistry, r: int) -> Fraction:
    # the trivial group has rank 0; every formula below degenerates there
    return Fraction(1) if r == 0 else registry.get(r)


def eta_lower_bound(r: int, n: int) -> int:
    """(2^r - 1)(n - 1) + 1, a lower bound for eta(C_n^r)."""
    if r < 1 or n < 2:
        raise ValueError("need r >= 1 and n >= 2")
    return (2**r - 1) * (n - 1) + 1


def eta_lower_bound_for(G: FiniteAbelianGroup) -> int:
    """The homocyclic lower bound applied to the largest C_n^s inside G
    with n = exp(G); eta does not decrease from such a subgroup to G."""
    if G.rank == 0:
        return 1
    n = G.exponent
    s = sum(1 for m in G.invariant_factors if m == n)
    return eta_lower_bound(s, n)


def eta_rank_two(m: int, n: int) -> int:
    """eta(C_m + C_n) = 2m + n - 2 for m | n."""
    if m < 1 or n % m:
        raise ValueError(f"need m | n, got m={m}, n={n}")
    return 2 * m + n - 2


def davenport_pgroup(p: int, alphas) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if any(a < 1 for a in alphas):
        raise ValueError("exponents must be positive")
    return sum(p**a - 1 for a in alphas) + 1


def pgroup_data(G: FiniteAbelianGroup) -> tuple[int, list[int]] | None:
    """(p, exponents) if G is a non-trivial p-group, else None."""
    if G.rank == 0:
        return None
    fac = factorize(G.exponent)
    if len(fac) != 1:
        return None
    p = fac[0][0]
    return p, [p_adic_valuation(n, p) for n in G.invariant_factors]


def davenport_formula(G: FiniteAbelianGroup) -> int | None:
    data = pgroup_data(G)
    return None if data is None else davenport_pgroup(*data)


def upsilon_factors(G: FiniteAbelianGroup, d_prime: int, d: int) -> list[int]:
    """The raw (unnormalized) upsilon_i(d', d), one per invariant factor."""
    check_divisor_pair(G, d_prime, d)
    out = []
    for n in G.invariant_factors:
        A = gcd(d_prime, n)
        B = lcm(d, n) // lcm(d_prime, n)
        out.append(A // gcd(A, B))
    return out


def upsilon_group(G: FiniteAbelianGroup, d_prime: int, d: int) -> FiniteAbelianGroup:
    ups = upsilon_factors(G, d_prime, d)
    if ups and ups[-1] != d_prime:
        raise AssertionError(f"last upsilon factor {ups[-1]} differs from d'={d_prime}")
    return FiniteAbelianGroup.from_moduli(ups)


def eta_pair_upper_exact(G: FiniteAbelianGroup, d_prime: int, d: int, registry: ConstantRegistry) -> Fraction:
    """c_r (d' - 1) + 1 as an exact rational."""
    check_divisor_pair(G, d_prime, d)
    return _rank_constant(registry, G.rank) * (d_prime - 1) + 1


def eta_pair_upper(G: FiniteAbelianGroup, d_prime: int, d: int, registry: ConstantRegistry) -> int:
    return _ceil(eta_pair_upper_exact(G, d_prime, d, registry))


def main_divisor_sum(n: int) -> int:
    """sum over d | n of (d / P+(d)^{nu_{P+(d)}(d)} - 1); the d = 1 term is 0."""
    total = 0
    for d in divisors(n):
        if d == 1:
            continue
        q = greatest_prime_factor(d)
        total += d // q ** p_adic_valuation(d, q) - 1
    return total


def t_main_bound_exact(G: FiniteAbelianGroup, registry: ConstantRegistry) -> Fraction:
    c = _rank_constant(registry, G.rank)
    n = G.exponent
    return c * main_divisor_sum(n) + c * (n - 1) + 1


def t_main_bound(G: FiniteAbelianGroup, registry: ConstantRegistry) -> int:
    return _ceil(t_main_bound_exact(G, registry))


def t_linear_bound(r: int, n: int, registry: ConstantRegistry) -> int:
    """2 c_r (n - 1) + 1."""
    return _ceil(2 * _rank_constant(registry, r) * (n - 1) + 1)


def t_pgroup_bound(G: FiniteAbelianGroup, registry: ConstantRegistry) -> int | None:
    """c_r (p^a - 1) + 1 when G = C_{p^a}^r, else None."""
    data = pgroup_data(G)
    if data is None or len(set(G.invariant_factors)) != 1:
        return None
    return _ceil(_rank_constant(registry, G.rank) * (G.exponent - 1) + 1)


def t_rank_two_pgroup(G: FiniteAbelianGroup) -> int | None:
    """t(C_{p^a} + C_{p^a}) = 3 p^a - 2, else None."""
    if G.rank == 2 and G.invariant_factors[0] == G.invariant_factors[1] and pgroup_data(G):
        return 3 * G.exponent - 2
    return None


def rho_divisor_bound(r: int, n: int, registry: ConstantRegistry) -> Fraction:
    """c_r * sum over d | n of (P-(d) - 1)/d."""
    c = _rank_constant(registry, r)
    return c * sum((Fraction(smallest_prime_factor(d) - 1, d) for d in divisors(n)), Fraction(0))


def rho_gs_bound(G: FiniteAbelianGroup) -> Fraction:
    return Fraction(G.order, smallest_prime_factor(G.exponent))


PairSource = Callable[[FiniteAbelianGroup, int, int], "int | Fraction"]


def exact_pair_source(config=None) -> PairSource:
    from .exact import eta_pair_exact

    cache: dict = {}

    def source(G, dp, d):
        key = (G.invariant_factors, dp, d)
        if key not in cache:
            res = eta_pair_exact(G, dp, d, config)
            if not res.exact:
                raise RuntimeError(f"eta_({dp},{d})({G}) not settled within budget")
            cache[key] = res.value
        return cache[key]

    return source


def bounded_pair_source(registry: ConstantRegistry) -> PairSource:
    return lambda G, dp, d: eta_pair_upper_exact(G, dp, d, registry)


def polytope_caps(G: FiniteAbelianGroup, pair_values: PairSource) -> dict[int, Fraction]:
    """Per-stratum caps x_d <= min over d' in D_d minus {1} of eta_(d',d) - 1.

    The stratum d = 1 is capped at 0: an identity element alone is a tiny
    zero-sum, so no avoiding sequence contains one.
    """
    caps = {1: Fraction(0)}
    for d in divisors(G.exponent):
        if d == 1:
            continue
        caps[d] = Fraction(min(pair_values(G, dp, d) for dp in divisors(d) if dp > 1)) - 1
    return caps


def rho_polytope_bound(G: FiniteAbelianGroup, pair_values: PairSource) -> Fraction:
    caps = polytope_caps(G, pair_values)
    return sum((c / d for d, c in caps.items()), Fraction(0))


@dataclass
class GapCertificate:
    r: int
    alpha: int
    alpha_window: tuple[int, ...]
    G: FiniteAbelianGroup
    H: FiniteAbelianGroup
    davenport_G: int
    eta_G_upper: int
    eta_H_lower: int
    chain_holds: bool

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "rank": self.r,
            "alpha": self.alpha,
            "alpha_window": list(self.alpha_window),
            "G": str(self.G),
            "H": str(self.H),
            "davenport_G": self.davenport_G,
            "eta_G_upper": self.eta_G_upper,
            "eta_H_lower": self.eta_H_lower,
            "chain": f"eta(G) <= {self.eta_G_upper} < {self.eta_H_lower} <= eta(H)",
            "conclusion": f"t({self.G}) > eta({self.G})" if self.chain_holds else "chain fails",
            "holds": self.chain_holds,
        }


def rank_gap_certificate(r: int) -> GapCertificate:
    """Certificate that t(G) > eta(G) for G = C_3^{r-1} + C_{3^alpha}.

    alpha ranges over integers with 2r - 1 <= 3^alpha <= 2^r - r, which
    puts D(G) = 2(r - 1) + 3^alpha at most 2 exp(G) - 1, so that
    eta(G) <= D(G) + exp(G) - 1.  The subgroup H = C_3^r has eta(H) at
    least 2^{r+1} - 1 from the homocyclic construction.  Since
    eta(H) <= t(H) <= t(G), equality t(G) = eta(G) would force
    eta(H) <= eta(G), which the chain rules out.
    """
    if r < 4:
        raise ValueError("the gap certificate needs rank at least 4; rank three is open")
    window = []
    a = 1
    while 3**a <= 2**r - r:
        if 3**a >= 2 * r - 1 and a >= 2:
            window.append(a)
        a += 1
    if not window:
        raise ArithmeticError(f"no admissible alpha for r={r}")
    alpha = window[0]
    G = FiniteAbelianGroup((3,) * (r - 1) + (3**alpha,))
    H = FiniteAbelianGroup((3,) * r)
    D = davenport_formula(G)
    exp = G.exponent
    assert D == 2 * (r - 1) + 3**alpha and D <= 2 * exp - 1
    eta_G = D + exp - 1
    assert eta_G == 2 * r + 2 * 3**alpha - 3
    eta_H = eta_lower_bound(r, 3)
    return GapCertificate(r, alpha, tuple(window), G, H, D, eta_G, eta_H, eta_G < eta_H)


def eta_from_davenport(G: FiniteAbelianGroup) -> int | None:
    """D(G) + exp(G) - 1 when G is a p-group with D(G) <= 2 exp(G) - 1."""
    D = davenport_formula(G)
    if D is None:
        raise ValueError(f"{G} is not a p-group")
    n = G.exponent
    return D + n - 1 if D <= 2 * n - 1 else None


# report

LOWER, UPPER, EQUAL = "lower", "upper", "equal"


@dataclass
class BoundEntry:
    name: str
    target: str  # invariant the bound speaks about: eta, t, rho, D
    kind: str  # lower / upper / equal
    value: int | Fraction | None
    applicable: bool = True
    note: str = ""


@dataclass
class ReportOptions:
    compute_exact: bool = True
    pair_source: str = "exact"  # or "bounded"
    config: object = None
    max_exact_order: int = 64


@dataclass
class BoundReport:
    group: FiniteAbelianGroup
    exact: dict[str, int | Fraction] = field(default_factory=dict)
    exact_complete: dict[str, bool] = field(default_factory=dict)
    entries: list[BoundEntry] = field(default_factory=list)

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def value(self, name: str):
        return self.entry(name).value

    def consistent(self, e: BoundEntry) -> bool | None:
        """Sandwich check recomputed from stored values; None if undecidable."""
        if not e.applicable or e.value is None:
            return None
        x = self.exact.get(e.target)
        if x is None or not self.exact_complete.get(e.target, False):
            return None
        if e.kind == LOWER:
            return e.value <= x
        if e.kind == UPPER:
            return x <= e.value
        return e.value == x

    def chain_flags(self) -> dict[str, bool | None]:
        """Relations between exact values and between bounds."""
        flags: dict[str, bool | None] = {}
        ex = {k: v for k, v in self.exact.items() if self.exact_complete.get(k)}
        flags["eta<=t"] = ex["eta"] <= ex["t"] if "eta" in ex and "t" in ex else None
        flags["t<=|G|"] = ex["t"] <= self.group.order if "t" in ex else None
        flags["D<=eta"] = ex["D"] <= ex["eta"] if "D" in ex and "eta" in ex else None
        try:
            flags["main<=linear"] = self.value("t_main_bound") <= self.value("t_linear_bound")
        except (KeyError, TypeError):
            flags["main<=linear"] = None
        try:
            pol, gs = self.value("rho_polytope_bound"), self.value("rho_gs_bound")
            flags["polytope<=gs"] = pol <= gs if pol is not None else None
        except KeyError:
            flags["polytope<=gs"] = None
        return flags

    @property
    def all_consistent(self) -> bool:
        bad = [e for e in self.entries if self.consistent(e) is False]
        return not bad and all(v is not False for v in self.chain_flags().values())

    def to_json(self) -> dict:
        def enc(v):
            if v is None:
                return None
            if isinstance(v, Fraction):
                return rational_json(v)
            return v

        return {
            "schema": 1,
            "group": str(self.group),
            "exact": {k: {"value": enc(v), "exact": self.exact_complete.get(k, False)} for k, v in self.exact.items()},
            "bounds": [
                {
                    "name": e.name,
                    "target": e.target,
                    "kind": e.kind,
                    "value": enc(e.value),
                    "applicable": e.applicable,
                    "consistent": self.consistent(e),
                    "note": e.note,
                }
                for e in self.entries
            ],
            "chain": self.chain_flags(),
            "all_consistent": self.all_consistent,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "value_num", "value_den", "applicable", "consistent"])
        for e in self.entries:
            v = None if e.value is None else Fraction(e.value)
            w.writerow([
                e.name,
                "" if v is None else v.numerator,
                "" if v is None else v.denominator,
                e.applicable,
                "" if self.consistent(e) is None else self.consistent(e),
            ])
        return buf.getvalue()


def bound_report(G: FiniteAbelianGroup, registry: ConstantRegistry | None = None,
                 options: ReportOptions | None = None) -> BoundReport:
    registry = registry or ConstantRegistry()
    options = options or ReportOptions()
    rep = BoundReport(G)
    r, n = G.rank, G.exponent
    c_known = r == 0 or registry.has(r)
    if not c_known:
        registry.get(r)  # raises MissingConstant naming the rank

    if options.compute_exact and G.order <= options.max_exact_order:
        from .exact import davenport_exact, eta_exact, rho_exact, t_exact

        for name, fn in (("D", davenport_exact), ("eta", eta_exact), ("t", t_exact), ("rho", rho_exact)):
            res = fn(G, options.config)
            rep.exact[name] = res.value
            rep.exact_complete[name] = res.exact

    add = rep.entries.append
    add(BoundEntry("lower_bound", "eta", LOWER, eta_lower_bound_for(G),
                   note="homocyclic bound on the C_n^s with n = exp(G)"))
    if r <= 2:
        m = G.invariant_factors[0] if r == 2 else 1
        add(BoundEntry("eta_rank_two", "eta", EQUAL, eta_rank_two(m, n) if r else 1))
    else:
        add(BoundEntry("eta_rank_two", "eta", EQUAL, None, applicable=False))
    add(BoundEntry("t_main_bound", "t", UPPER, t_main_bound(G, registry)))
    add(BoundEntry("t_linear_bound", "t", UPPER, t_linear_bound(r, n, registry)))
    add(BoundEntry("rho_divisor_bound", "rho", UPPER, rho_divisor_bound(r, n, registry)))
    src = exact_pair_source(options.config) if options.pair_source == "exact" else bounded_pair_source(registry)
    add(BoundEntry("rho_polytope_bound", "rho", UPPER, rho_polytope_bound(G, src), note=options.pair_source))
    add(BoundEntry("rho_gs_bound", "rho", UPPER, rho_gs_bound(G)))
    tp = t_pgroup_bound(G, registry)
    add(BoundEntry("t_pgroup_bound", "t", UPPER, tp, applicable=tp is not None))
    tr = t_rank_two_pgroup(G)
    add(BoundEntry("t_rank_two", "t", EQUAL, tr, applicable=tr is not None))
    df = davenport_formula(G)
    add(BoundEntry("davenport_formula", "D", EQUAL, df, applicable=df is not None))
    ed = eta_from_davenport(G) if df is not None else None
    add(BoundEntry("eta_from_davenport", "eta", UPPER, ed, applicable=ed is not None))
    add(BoundEntry("cardinality_bound", "t", UPPER, G.order))
    return rep
