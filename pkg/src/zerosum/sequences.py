"""Sequences over G, cross numbers, and the subset-sum DP behind every
"contains a subsequence such that ..." check.

The DP runs over a flat list of items (element indices with a cost).  For
each prefix of the item list it stores the minimum cost of a non-empty
sub-multiset per group sum, which is enough to rebuild a witness by
walking the prefixes backwards.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .groups import FiniteAbelianGroup, GroupElement, element_order

INF = np.iinfo(np.int64).max // 4


@dataclass(frozen=True)
class GSequence:
    """A finite multiset of elements of ``group``.

    ``counts`` holds (element, multiplicity) pairs in element enumeration
    order with positive multiplicities.
    """

    group: FiniteAbelianGroup
    counts: tuple[tuple[GroupElement, int], ...]

    def __post_init__(self):
        G = self.group
        merged: dict[GroupElement, int] = {}
        for g, m in self.counts:
            G.check(g)
            if m < 0:
                raise ValueError(f"negative multiplicity for {g}")
            if m:
                merged[g] = merged.get(g, 0) + int(m)
        object.__setattr__(self, "counts", tuple(sorted(merged.items(), key=lambda t: G.index(t[0]))))

    @classmethod
    def from_elements(cls, G: FiniteAbelianGroup, elements: Iterable) -> "GSequence":
        return cls(G, tuple((_as_element(G, g), 1) for g in elements))

    @classmethod
    def from_counts(cls, G: FiniteAbelianGroup, counts: Mapping | Iterable) -> "GSequence":
        items = counts.items() if isinstance(counts, Mapping) else counts
        return cls(G, tuple((_as_element(G, g), m) for g, m in items))

    @classmethod
    def empty(cls, G: FiniteAbelianGroup) -> "GSequence":
        return cls(G, ())

    @property
    def multiplicities(self) -> dict[GroupElement, int]:
        return dict(self.counts)

    @property
    def length(self) -> int:
        return sum(m for _, m in self.counts)

    def __len__(self):
        return self.length

    def count(self, g: GroupElement) -> int:
        return self.multiplicities.get(g, 0)

    def elements(self) -> list[GroupElement]:
        """Flat list in enumeration order, repeated by multiplicity."""
        return [g for g, m in self.counts for _ in range(m)]

    def __iter__(self):
        return iter(self.elements())

    def __add__(self, other: "GSequence") -> "GSequence":
        _same_group(self, other)
        return GSequence(self.group, self.counts + other.counts)

    def __sub__(self, other: "GSequence") -> "GSequence":
        _same_group(self, other)
        if not self.contains(other):
            raise ValueError("subtrahend is not a sub-multiset")
        mine = self.multiplicities
        for g, m in other.counts:
            mine[g] -= m
        return GSequence(self.group, tuple(mine.items()))

    def contains(self, other: "GSequence") -> bool:
        mine = self.multiplicities
        return all(mine.get(g, 0) >= m for g, m in other.counts)

    def literal(self) -> str:
        return format_sequence_literal(self)

    def __str__(self):
        return self.literal()


def _same_group(a: GSequence, b: GSequence) -> None:
    if a.group != b.group:
        raise ValueError(f"sequences over different groups {a.group} and {b.group}")


def _as_element(G: FiniteAbelianGroup, g) -> GroupElement:
    if isinstance(g, GroupElement):
        return g
    if isinstance(g, int):
        return G.element((g,))
    return G.element(tuple(g))


_TERM_RE = re.compile(r"^\(?\s*([-\d\s,]*?)\s*\)?\s*(?:\*\s*(\d+))?$")


def parse_sequence_literal(G: FiniteAbelianGroup, text: str) -> GSequence:
    """Parse "(1,0)*2;(0,1)" into a sequence over G."""
    counts = []
    for term in (t.strip() for t in text.split(";")):
        if not term:
            continue
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"malformed sequence term {term!r}")
        body, mult = m.group(1), m.group(2)
        coords = tuple(int(c) for c in re.split(r"[,\s]+", body) if c)
        if len(coords) != G.rank:
            raise ValueError(f"term {term!r} has {len(coords)} coordinates, group rank is {G.rank}")
        counts.append((G.element(coords), int(mult) if mult else 1))
    return GSequence(G, tuple(counts))


def format_sequence_literal(S: GSequence) -> str:
    return ";".join(str(g) if m == 1 else f"{g}*{m}" for g, m in S.counts)


@dataclass(frozen=True, order=True)
class ScaledCross:
    """Cross number stored as the integer k(S) * exponent."""

    scaled: int
    exponent: int

    @property
    def value(self):
        from fractions import Fraction

        return Fraction(self.scaled, self.exponent)

    @property
    def is_tiny(self) -> bool:
        return self.scaled <= self.exponent


def cross_number(S: GSequence) -> ScaledCross:
    n = S.group.exponent
    return ScaledCross(sum(m * (n // element_order(S.group, g)) for g, m in S.counts), n)


def sequence_sum(S: GSequence) -> GroupElement:
    G = S.group
    total = [0] * G.rank
    for g, m in S.counts:
        total = [t + m * c for t, c in zip(total, g.coords)]
    return G.element(total)


def order_stratum(S: GSequence, d: int) -> GSequence:
    G = S.group
    if d < 1 or G.exponent % d:
        raise ValueError(f"{d} does not divide exp(G) = {G.exponent}")
    return GSequence(G, tuple((g, m) for g, m in S.counts if element_order(G, g) == d))


class Objective(enum.Enum):
    MIN_SCALED_CROSS = "min_scaled_cross"
    MIN_LENGTH = "min_length"


def item_weights(G: FiniteAbelianGroup, items: Sequence[int], objective: Objective) -> list[int]:
    if objective is Objective.MIN_LENGTH:
        return [1] * len(items)
    n = G.exponent
    return [n // G.orders[i] for i in items]


class ItemDP:
    """Min-cost subset-sum DP over a list of (element index, cost) items.

    ``layers[i][s]`` is the minimum cost of a non-empty subset of the first
    i+1 items with sum index s (INF if none).  When ``stop`` is given the
    DP halts after the first prefix where ``stop(layer)`` is true.
    """

    def __init__(self, G: FiniteAbelianGroup, items: Sequence[int], weights: Sequence[int], stop=None):
        self.G = G
        self.items = list(items)
        self.weights = list(weights)
        N = G.order
        self.layers: list[np.ndarray] = []
        trans_cache: dict[int, np.ndarray] = {}
        prev = np.full(N, INF, dtype=np.int64)
        for g, w in zip(self.items, self.weights):
            t = trans_cache.get(g)
            if t is None:
                t = trans_cache[g] = G.translation(g)
            cur = prev.copy()
            shifted = np.full(N, INF, dtype=np.int64)
            shifted[t] = prev + w
            np.minimum(cur, shifted, out=cur)
            if w < cur[g]:
                cur[g] = w
            cur[cur >= INF] = INF
            self.layers.append(cur)
            prev = cur
            if stop is not None and stop(cur):
                break

    @property
    def final(self) -> np.ndarray:
        if not self.layers:
            return np.full(self.G.order, INF, dtype=np.int64)
        return self.layers[-1]

    def reconstruct(self, s: int) -> list[int]:
        """Positions (into ``items``) of an optimal subset with sum index s."""
        G = self.G
        i = len(self.layers) - 1
        target = int(self.layers[i][s]) if i >= 0 else INF
        if target >= INF:
            raise ValueError("sum not reachable")
        picked = []
        while True:
            before = self.layers[i - 1][s] if i > 0 else INF
            if before == target:
                i -= 1
                continue
            g, w = self.items[i], self.weights[i]
            picked.append(i)
            if s == g and target == w:
                break
            s = _sub_index(G, s, g)
            target -= w
            i -= 1
        return picked[::-1]


def _sub_index(G: FiniteAbelianGroup, a: int, b: int) -> int:
    x, y = G.elements[a].coords, G.elements[b].coords
    return sum(((u - v) % n) * st for u, v, n, st in zip(x, y, G.invariant_factors, G.strides))


@dataclass
class SumTable:
    objective: Objective
    sequence: GSequence
    dp: ItemDP

    @property
    def values(self) -> dict[GroupElement, int]:
        G = self.sequence.group
        return {G.elements[s]: int(v) for s, v in enumerate(self.dp.final) if v < INF}

    def value(self, s: GroupElement) -> int | None:
        v = int(self.dp.final[self.sequence.group.index(s)])
        return None if v >= INF else v

    def witness(self, s: GroupElement) -> GSequence:
        G = self.sequence.group
        pos = self.dp.reconstruct(G.index(s))
        return GSequence.from_elements(G, [G.elements[self.dp.items[p]] for p in pos])


def _items_of(S: GSequence) -> list[int]:
    G = S.group
    return [G.index(g) for g, m in S.counts for _ in range(m)]


def build_sum_table(S: GSequence, objective: Objective) -> SumTable:
    items = _items_of(S)
    return SumTable(objective, S, ItemDP(S.group, items, item_weights(S.group, items, objective)))


def _first_hit(S: GSequence, objective: Objective, targets: np.ndarray, budget: int) -> GSequence | None:
    """Witness with sum in ``targets`` (bool mask) and cost <= budget."""
    G = S.group
    items = _items_of(S)
    if not items:
        return None

    def ok(layer):
        return bool(np.any(layer[targets] <= budget))

    dp = ItemDP(G, items, item_weights(G, items, objective), stop=ok)
    final = dp.final
    if not ok(final):
        return None
    cand = np.nonzero(targets & (final <= budget))[0]
    s = int(min(cand, key=lambda j: (final[j], j)))
    pos = dp.reconstruct(s)
    return GSequence.from_elements(G, [G.elements[items[p]] for p in pos])


def _zero_mask(G: FiniteAbelianGroup) -> np.ndarray:
    m = np.zeros(G.order, dtype=bool)
    m[0] = True
    return m


def has_tiny_zero_sum(S: GSequence) -> GSequence | None:
    """A non-empty zero-sum subsequence with cross number at most 1, if any."""
    return _first_hit(S, Objective.MIN_SCALED_CROSS, _zero_mask(S.group), S.group.exponent)


def has_short_zero_sum(S: GSequence) -> GSequence | None:
    """A non-empty zero-sum subsequence of length at most exp(G), if any."""
    return _first_hit(S, Objective.MIN_LENGTH, _zero_mask(S.group), S.group.exponent)


def check_divisor_pair(G: FiniteAbelianGroup, d_prime: int, d: int) -> None:
    if d_prime < 1 or d < 1 or d % d_prime or G.exponent % d:
        raise ValueError(f"need d' | d | exp(G); got d'={d_prime}, d={d}, exp={G.exponent}")


def has_pair_subsequence(S: GSequence, d_prime: int, d: int) -> GSequence | None:
    """A non-empty subsequence of length <= d' with sum in G_{d/d'}, if any.

    S must be supported on G_d.
    """
    G = S.group
    check_divisor_pair(G, d_prime, d)
    for g, _ in S.counts:
        if d % element_order(G, g):
            raise ValueError(f"{g} is not in G_{d}")
    return _first_hit(S, Objective.MIN_LENGTH, G.subgroup_mask(d // d_prime), d_prime)


def is_zero_sum_free_short(S: GSequence) -> bool:
    return has_short_zero_sum(S) is None


def validate_witness(S: GSequence, W: GSequence, *, sum_mask=None, max_length=None, max_scaled=None) -> bool:
    """Check a claimed witness W against S without using the DP."""
    G = S.group
    if W.length == 0 or not S.contains(W):
        return False
    s = sequence_sum(W)
    if sum_mask is None:
        if s != G.identity:
            return False
    elif not sum_mask[G.index(s)]:
        return False
    if max_length is not None and W.length > max_length:
        return False
    if max_scaled is not None and cross_number(W).scaled > max_scaled:
        return False
    return True


def has_zero_sum_subsequence(S: GSequence) -> GSequence | None:
    """Any non-empty zero-sum subsequence (shortest first), if one exists."""
    return _first_hit(S, Objective.MIN_LENGTH, _zero_mask(S.group), S.length)
