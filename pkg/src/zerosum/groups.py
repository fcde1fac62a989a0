"""Finite Abelian groups in invariant-factor form.

Elements are coordinate tuples.  The element enumeration order is
lexicographic on coordinates, and the index of an element in that order
is its mixed-radix value; every search in the package refers to it.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd, lcm, prod
from typing import Iterable, Sequence

import numpy as np

from .arith import factorize


class GroupSpecError(ValueError):
    pass


def normalize_invariant_factors(moduli: Sequence[int]) -> list[int]:
    """Invariant factors n_1 | ... | n_r of the product of C_m over moduli."""
    powers: dict[int, list[int]] = {}
    for m in moduli:
        if m < 1:
            raise GroupSpecError(f"modulus must be positive, got {m}")
        for p, e in factorize(m):
            powers.setdefault(p, []).append(p**e)
    if not powers:
        return []
    r = max(len(v) for v in powers.values())
    out = [1] * r
    for v in powers.values():
        v.sort(reverse=True)
        for j, q in enumerate(v):
            out[r - 1 - j] *= q
    return out


@dataclass(frozen=True, order=True)
class GroupElement:
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __str__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fs = tuple(int(n) for n in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise GroupSpecError(f"{fs} is not a divisibility chain")
        if any(n < 2 for n in fs):
            raise GroupSpecError(f"invariant factors must exceed 1: {fs}")

    @classmethod
    def from_moduli(cls, moduli: Iterable[int]) -> "FiniteAbelianGroup":
        return cls(tuple(normalize_invariant_factors(list(moduli))))

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def __str__(self):
        if not self.invariant_factors:
            return "C1"
        return "x".join(f"C{n}" for n in self.invariant_factors)

    def __len__(self):
        return self.order

    # element handling

    def element(self, coords: Iterable[int]) -> GroupElement:
        """Element with the given coordinates, reduced modulo the factors."""
        cs = tuple(coords)
        self._check_dim(cs)
        return GroupElement(tuple(c % n for c, n in zip(cs, self.invariant_factors)))

    @property
    def identity(self) -> GroupElement:
        return GroupElement((0,) * self.rank)

    def _check_dim(self, cs) -> None:
        if len(cs) != self.rank:
            raise ValueError(f"element of dimension {len(cs)} in a group of rank {self.rank}")

    def check(self, g: GroupElement) -> None:
        self._check_dim(g.coords)
        if any(not 0 <= c < n for c, n in zip(g.coords, self.invariant_factors)):
            raise ValueError(f"{g} is not reduced in {self}")

    def contains(self, g: GroupElement) -> bool:
        try:
            self.check(g)
        except ValueError:
            return False
        return True

    @cached_property
    def strides(self) -> tuple[int, ...]:
        fs = self.invariant_factors
        return tuple(prod(fs[i + 1 :]) for i in range(len(fs)))

    def index(self, g: GroupElement) -> int:
        return sum(c * s for c, s in zip(g.coords, self.strides))

    def element_at(self, i: int) -> GroupElement:
        return self.elements[i]

    @cached_property
    def elements(self) -> tuple[GroupElement, ...]:
        return tuple(GroupElement(c) for c in itertools.product(*(range(n) for n in self.invariant_factors)))

    @cached_property
    def coords_array(self) -> np.ndarray:
        return np.array([g.coords for g in self.elements], dtype=np.int64).reshape(self.order, self.rank)

    @cached_property
    def orders(self) -> tuple[int, ...]:
        """ord of each element, indexed by enumeration position."""
        return tuple(_order(self.invariant_factors, g.coords) for g in self.elements)

    def add_index(self, i: int, j: int) -> int:
        a, b = self.elements[i].coords, self.elements[j].coords
        return sum(((x + y) % n) * s for x, y, n, s in zip(a, b, self.invariant_factors, self.strides))

    def translation(self, g: int) -> np.ndarray:
        """Permutation array t with t[i] = index(element_i + element_g)."""
        c = (self.coords_array + self.coords_array[g]) % np.array(self.invariant_factors, dtype=np.int64)
        return c @ np.array(self.strides, dtype=np.int64) if self.rank else np.zeros(1, dtype=np.int64)

    def subgroup_mask(self, d: int) -> np.ndarray:
        """Boolean mask (by index) of G_d = {x : d x = 0}."""
        return np.array([d % o == 0 for o in self.orders], dtype=bool)


def _order(factors: Sequence[int], coords: Sequence[int]) -> int:
    o = 1
    for n, c in zip(factors, coords):
        o = lcm(o, n // gcd(n, c))
    return o


_CYCLIC_RE = re.compile(r"^\s*c\s*(\d+)\s*$", re.IGNORECASE)


def parse_group(spec: str) -> FiniteAbelianGroup:
    """Parse "C4xC6" (case-insensitive) or "[4,6]" into invariant-factor form."""
    text = spec.strip()
    if not text:
        raise GroupSpecError("empty group spec")
    if text.startswith("["):
        if not text.endswith("]"):
            raise GroupSpecError(f"malformed group spec {spec!r}")
        body = text[1:-1].strip()
        parts = [p for p in re.split(r"[,\s]+", body) if p] if body else []
        if not parts:
            raise GroupSpecError(f"malformed group spec {spec!r}")
        try:
            moduli = [int(p) for p in parts]
        except ValueError:
            raise GroupSpecError(f"malformed group spec {spec!r}") from None
    else:
        moduli = []
        for part in re.split(r"[x×⊕]", text, flags=re.IGNORECASE):
            m = _CYCLIC_RE.match(part)
            if not m:
                raise GroupSpecError(f"malformed group spec {spec!r}")
            moduli.append(int(m.group(1)))
    if any(m < 1 for m in moduli):
        raise GroupSpecError(f"moduli must be positive in {spec!r}")
    return FiniteAbelianGroup.from_moduli(moduli)


def element_order(G: FiniteAbelianGroup, g: GroupElement) -> int:
    G._check_dim(g.coords)
    return _order(G.invariant_factors, g.coords)


def in_order_dividing_subgroup(G: FiniteAbelianGroup, g: GroupElement, d: int) -> bool:
    if d < 1 or G.exponent % d:
        raise ValueError(f"{d} does not divide exp(G) = {G.exponent}")
    return d % element_order(G, g) == 0


def enumerate_elements(G: FiniteAbelianGroup, order_filter: int | None = None) -> list[GroupElement]:
    if order_filter is None:
        return list(G.elements)
    if order_filter < 1 or G.exponent % order_filter:
        raise ValueError(f"order filter {order_filter} does not divide exp(G) = {G.exponent}")
    return [g for g, o in zip(G.elements, G.orders) if o == order_filter]


def add(G: FiniteAbelianGroup, a: GroupElement, b: GroupElement) -> GroupElement:
    G._check_dim(a.coords)
    G._check_dim(b.coords)
    return GroupElement(tuple((x + y) % n for x, y, n in zip(a.coords, b.coords, G.invariant_factors)))


def neg(G: FiniteAbelianGroup, a: GroupElement) -> GroupElement:
    G._check_dim(a.coords)
    return GroupElement(tuple((-x) % n for x, n in zip(a.coords, G.invariant_factors)))


def scale(G: FiniteAbelianGroup, k: int, a: GroupElement) -> GroupElement:
    return GroupElement(tuple((k * x) % n for x, n in zip(a.coords, G.invariant_factors)))


def order_dividing_subgroup(G: FiniteAbelianGroup, d: int) -> tuple[FiniteAbelianGroup, list[int]]:
    """G_d as a group together with the embedding of its basis into G.

    Returns (H, scales): basis vector i of the coordinate system of G_d is
    scales[i] times e_i in G.  Axes where gcd(n_i, d) = 1 vanish in H.
    """
    fs = G.invariant_factors
    keep = [(i, gcd(n, d)) for i, n in enumerate(fs) if gcd(n, d) > 1]
    H = FiniteAbelianGroup(tuple(m for _, m in keep))
    return H, keep


def automorphism_generator_images(G: FiniteAbelianGroup) -> list[list[tuple[int, ...]]]:
    """Images of the standard basis under a generating set of automorphisms.

    Uses unit scalings of one axis, swaps of axes with equal factors, and
    shears e_j -> e_j + c e_i with n_j c = 0 mod n_i.  The set need not
    generate the full automorphism group; orbits of the subgroup it
    generates are still unions of genuine automorphism images, which is
    all symmetry reduction needs.
    """
    fs = G.invariant_factors
    r = len(fs)
    basis = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
    gens = []
    for i, n in enumerate(fs):
        for u in range(2, n):
            if gcd(u, n) == 1:
                img = list(basis)
                img[i] = tuple(u if k == i else 0 for k in range(r))
                gens.append(img)
    for i in range(r):
        for j in range(i + 1, r):
            if fs[i] == fs[j]:
                img = list(basis)
                img[i], img[j] = basis[j], basis[i]
                gens.append(img)
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            c = fs[i] // gcd(fs[i], fs[j])
            if c % fs[i] == 0:
                continue
            img = list(basis)
            img[j] = tuple((1 if k == j else 0) + (c if k == i else 0) for k in range(r))
            gens.append(img)
    return gens


def automorphism_orbit_representatives(G: FiniteAbelianGroup) -> list[int]:
    """Minimum index of each orbit under the generated automorphism group."""
    N = G.order
    fs = np.array(G.invariant_factors, dtype=np.int64)
    strides = np.array(G.strides, dtype=np.int64)
    X = G.coords_array
    parent = list(range(N))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for img in automorphism_generator_images(G):
        M = np.array(img, dtype=np.int64).reshape(G.rank, G.rank)
        Y = (X @ M) % fs
        idx = Y @ strides
        if len(set(idx.tolist())) != N:
            raise AssertionError(f"generator {img} is not bijective on {G}")
        for a, b in enumerate(idx.tolist()):
            ra, rb = find(a), find(b)
            if ra != rb:
                lo, hi = min(ra, rb), max(ra, rb)
                parent[hi] = lo
    return sorted({find(a) for a in range(N)})
