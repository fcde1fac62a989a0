"""Exact extremal search for zero-sum avoidance problems.

A node of the search is a multiset built by choosing (element, copies)
pairs in order of copies descending, then element index ascending, so
each multiset is generated once.  The node state is the layered family
N_0 <= N_1 <= ... <= N_B of bitsets, where N_c holds the sums of
non-empty sub-multisets of cost at most c.  With a violation set Z,
adding i copies of g is safe iff no sum in N_{B - i w(g)} (or the empty
sum) lands in Z - i g.

Upper bound at a node: for each unused element, the largest number of
copies that can still be added to the current state, capped by the
ordering rule, times its objective weight.  States only grow along a
branch, so this cap never increases below the node.
"""

from __future__ import annotations

import enum
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..groups import FiniteAbelianGroup, GroupElement, automorphism_orbit_representatives, order_dividing_subgroup
from ..sequences import GSequence, check_divisor_pair

NUMBA_MAX_ORDER = 64


class Predicate(enum.Enum):
    ZERO_SUM = "zero_sum"
    SHORT_ZERO_SUM = "short_zero_sum"
    TINY_ZERO_SUM = "tiny_zero_sum"
    PAIR = "pair"


class SearchObjective(enum.Enum):
    MAX_LENGTH = "max_length"
    MAX_SCALED_CROSS = "max_scaled_cross"


@dataclass(frozen=True)
class AvoidanceProblem:
    """Find the largest sequence over ``group`` avoiding ``predicate``.

    For PAIR, sequences range over G_d and must avoid a non-empty
    subsequence of length <= d' with sum in G_{d/d'}.  ``length_cap``
    (optional) is a known upper bound on the length of an avoiding
    sequence; reaching it ends the search early.  ``value_cap`` is the
    same for the scaled-cross objective.
    """

    group: FiniteAbelianGroup
    predicate: Predicate
    objective: SearchObjective = SearchObjective.MAX_LENGTH
    d_prime: int | None = None
    d: int | None = None
    length_cap: int | None = None
    value_cap: int | None = None

    def __post_init__(self):
        if self.predicate is Predicate.PAIR:
            if self.d_prime is None or self.d is None:
                raise ValueError("PAIR needs d' and d")
            check_divisor_pair(self.group, self.d_prime, self.d)
        if self.objective is SearchObjective.MAX_SCALED_CROSS and self.predicate is not Predicate.TINY_ZERO_SUM:
            raise ValueError("the scaled-cross objective is defined for tiny zero-sum avoidance")


@dataclass(frozen=True)
class SearchConfig:
    budget: int = 10**9
    workers: int = 1
    symmetry: bool = True
    kernel: str = "auto"  # "auto", "numba" or "python"
    tt_bits: int | None = None


@dataclass
class ExactResult:
    invariant: str
    group: FiniteAbelianGroup
    value: int | Fraction
    extremal_witness: GSequence
    nodes_explored: int
    wall_time: float
    exact: bool
    kernel: str = ""
    problem: AvoidanceProblem | None = field(default=None, repr=False)

    @property
    def best_objective(self) -> int:
        """Objective value of the witness (length, or scaled cross)."""
        if isinstance(self.value, Fraction):
            return int(self.value * self.group.exponent)
        return self.value - 1

    def to_json(self) -> dict:
        from ..report import rational_json

        v = self.value
        return {
            "schema": 1,
            "group": str(self.group),
            "invariant": self.invariant,
            "value": rational_json(v) if isinstance(v, Fraction) else v,
            "witness": self.extremal_witness.literal(),
            "witness_length": self.extremal_witness.length,
            "nodes": self.nodes_explored,
            "millis": int(round(self.wall_time * 1000)),
            "exact": self.exact,
        }


class _Instance:
    """Everything the kernels need, derived from a problem."""

    def __init__(self, problem: AvoidanceProblem, symmetry: bool):
        G = problem.group
        self.problem = problem
        if problem.predicate is Predicate.PAIR:
            H, keep = order_dividing_subgroup(G, problem.d)
            self.embed_axes = keep
            z_order = problem.d // problem.d_prime
            B = problem.d_prime
        else:
            H = G
            self.embed_axes = [(i, n) for i, n in enumerate(G.invariant_factors)]
            z_order = 1
            B = {Predicate.ZERO_SUM: 0}.get(problem.predicate, G.exponent)
        self.H = H
        N = H.order
        e = H.exponent
        orders = H.orders
        self.N, self.B = N, B
        if problem.predicate is Predicate.ZERO_SUM:
            w = [0] * N
        elif problem.predicate is Predicate.TINY_ZERO_SUM:
            w = [e // o for o in orders]
        else:
            w = [1] * N
        self.w = w
        self.obj = w[:] if problem.objective is SearchObjective.MAX_SCALED_CROSS else [1] * N
        zmask = [z_order % o == 0 for o in orders]
        self.allowed = [not zmask[g] for g in range(N)]
        fs = H.invariant_factors
        strides = H.strides
        self.fs, self.strides = fs, strides
        maxi = e + 1
        self.zsh = []
        zs = [z for z in range(N) if zmask[z]]
        for g in range(N):
            gc = H.elements[g].coords
            row = []
            for i in range(maxi + 1):
                bits = 0
                for z in zs:
                    zc = H.elements[z].coords
                    idx = sum(((x - i * y) % n) * s for x, y, n, s in zip(zc, gc, fs, strides))
                    bits |= 1 << idx
                row.append(bits)
            self.zsh.append(row)
        if symmetry and N > 1:
            reps = set(automorphism_orbit_representatives(H))
            self.rootmask = [g in reps for g in range(N)]
        else:
            self.rootmask = [True] * N
        self.sigma_count = problem.predicate is Predicate.ZERO_SUM
        if problem.objective is SearchObjective.MAX_LENGTH:
            self.cap = problem.length_cap if problem.length_cap is not None else 1 << 60
        else:
            self.cap = problem.value_cap if problem.value_cap is not None else 1 << 60
        self._rot = None

    # rotation tables shared by both kernels
    def rotations(self):
        if self._rot is None:
            H, N = self.H, self.N
            full = (1 << N) - 1
            mx = max(self.fs) if self.fs else 1
            r = H.rank
            rlo = [[0] * mx for _ in range(r)]
            rhi = [[0] * mx for _ in range(r)]
            rup = [[0] * mx for _ in range(r)]
            rdn = [[0] * mx for _ in range(r)]
            for a, n in enumerate(self.fs):
                for y in range(1, n):
                    lo = 0
                    for k, el in enumerate(H.elements):
                        if el.coords[a] < n - y:
                            lo |= 1 << k
                    rlo[a][y] = lo
                    rhi[a][y] = full ^ lo
                    rup[a][y] = y * self.strides[a]
                    rdn[a][y] = (n - y) * self.strides[a]
            self._rot = (rlo, rhi, rup, rdn)
        return self._rot

    def shift(self, m: int, g: int) -> int:
        rlo, rhi, rup, rdn = self.rotations()
        for a, y in enumerate(self.H.elements[g].coords):
            if y:
                m = ((m & rlo[a][y]) << rup[a][y]) | ((m & rhi[a][y]) >> rdn[a][y])
        return m

    def add_copy(self, st: list[int], g: int) -> list[int]:
        wg = self.w[g]
        bit = 1 << g
        out = st[:]
        for c in range(wg, self.B + 1):
            out[c] = st[c] | self.shift(st[c - wg], g) | bit
        return out

    def max_copies(self, st: list[int], g: int) -> int:
        i = 1
        while True:
            c = i * self.w[g]
            if c > self.B:
                break
            if (st[self.B - c] | 1) & self.zsh[g][i]:
                break
            i += 1
        return i - 1

    def to_sequence(self, picks) -> GSequence:
        """Map (H index, copies) pairs to a sequence over the original group."""
        G = self.problem.group
        counts = []
        for g, k in picks:
            hc = self.H.elements[g].coords
            coords = [0] * G.rank
            for (axis, m), x in zip(self.embed_axes, hc):
                coords[axis] = x * (G.invariant_factors[axis] // m)
            counts.append((G.element(coords), int(k)))
        return GSequence(G, tuple(counts))


class _Stop(Exception):
    pass


def _python_search(inst: _Instance, st0, used0, mcap0, last0, val0, rootmask, cap, budget):
    N, B = inst.N, inst.B
    obj, allowed = inst.obj, inst.allowed
    tt: dict = {}
    best = -1
    best_w: list = []
    nodes = 0
    chosen: list = []
    complete = True
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * N + 1000))

    def visit(st, used, mcap, last, val, root):
        nonlocal best, best_w, nodes
        nodes += 1
        if nodes > budget:
            raise _Stop("budget")
        if val > best:
            best = val
            best_w = list(chosen)
            if best >= cap:
                raise _Stop("cap")
        cands = []
        live = 0
        bound = 0
        for g in range(N):
            if not allowed[g] or (root and not rootmask[g]):
                continue
            m = inst.max_copies(st, g)
            if (used >> g) & 1:
                if m > 0:
                    live |= 1 << g
                continue
            lim = mcap if g > last else mcap - 1
            m = min(m, lim)
            if m > 0:
                cands.append((g, m))
                bound += m * obj[g]
        if inst.sigma_count:
            bound = min(bound, N - 1 - bin(st[0]).count("1"))
        key = (tuple(st), live, mcap, last)
        tv = tt.get(key)
        if tv is not None and val + tv <= best:
            return
        if len(tt) > 2_000_000:
            tt.clear()
        if val + bound <= best:
            tt[key] = bound
            return
        cands.sort(key=lambda t: (-t[1], t[0]))
        for g, m in cands:
            for k in range(m, 0, -1):
                child = st
                for _ in range(k):
                    child = inst.add_copy(child, g)
                chosen.append((g, k))
                visit(child, used | (1 << g), k, g, val + k * obj[g], False)
                chosen.pop()
        tt[key] = best - val

    try:
        visit(list(st0), used0, mcap0, last0, val0, True)
    except _Stop as stop:
        complete = str(stop) == "cap"
    return best, best_w, nodes, complete


def _numba_search(inst: _Instance, st0, used0, mcap0, last0, val0, rootmask, cap, budget, tt_bits):
    from . import _numba_kernel as K

    rlo, rhi, rup, rdn = inst.rotations()
    u64 = lambda a: np.array(a, dtype=np.uint64)
    H = inst.H
    coords = H.coords_array if H.rank else np.zeros((inst.N, 0), dtype=np.int64)
    r = max(H.rank, 1)
    mx = max(inst.fs) if inst.fs else 1
    shape = (r, mx)
    R = [u64(t).reshape(shape) if H.rank else np.zeros(shape, dtype=np.uint64) for t in (rlo, rhi, rup, rdn)]
    best, bg, bk, nodes, complete = K.search(
        inst.N, inst.B,
        np.array(inst.w, dtype=np.int64), np.array(inst.obj, dtype=np.int64),
        coords, R[0], R[1], R[2], R[3],
        u64(inst.zsh), np.array(inst.allowed, dtype=np.bool_), np.array(rootmask, dtype=np.bool_),
        u64(st0), np.uint64(used0), mcap0, last0, val0,
        min(cap, 1 << 62), min(budget, 1 << 62), inst.sigma_count, tt_bits,
    )
    if best >= cap:
        complete = True
    return int(best), [(int(g), int(k)) for g, k in zip(bg, bk)], int(nodes), bool(complete)


def _choose_kernel(inst: _Instance, kernel: str) -> str:
    if kernel == "auto":
        return "numba" if inst.N <= NUMBA_MAX_ORDER else "python"
    if kernel == "numba" and inst.N > NUMBA_MAX_ORDER:
        raise ValueError(f"the compiled kernel handles order <= {NUMBA_MAX_ORDER}")
    if kernel not in ("numba", "python"):
        raise ValueError(f"unknown kernel {kernel!r}")
    return kernel


def _tt_bits(inst: _Instance, requested: int | None) -> int:
    if requested is not None:
        return requested
    per_entry = 8 * (inst.B + 4) + 8
    return max(10, min(20, int(math.log2((64 << 20) / per_entry))))


def _run(inst, kind, root, rootmask, budget, tt_bits):
    st0, used0, mcap0, last0, val0 = root
    if kind == "numba":
        return _numba_search(inst, st0, used0, mcap0, last0, val0, rootmask, inst.cap, budget, tt_bits)
    return _python_search(inst, st0, used0, mcap0, last0, val0, rootmask, inst.cap, budget)


def _branch_worker(args):
    problem, symmetry, kind, root, budget, tt_bits = args
    inst = _Instance(problem, symmetry)
    return _run(inst, kind, root, [True] * inst.N, budget, tt_bits)


def _root_branches(inst: _Instance):
    """Children of the empty multiset in search order."""
    N, B = inst.N, inst.B
    st = [0] * (B + 1)
    cands = []
    for g in range(N):
        if inst.allowed[g] and inst.rootmask[g]:
            m = inst.max_copies(st, g)
            if m > 0:
                cands.append((g, m))
    cands.sort(key=lambda t: (-t[1], t[0]))
    out = []
    for g, m in cands:
        for k in range(m, 0, -1):
            child = st
            for _ in range(k):
                child = inst.add_copy(child, g)
            out.append(((g, k), (child, 1 << g, k, g, k * inst.obj[g])))
    return out


_INVARIANT_NAMES = {
    Predicate.ZERO_SUM: "D",
    Predicate.SHORT_ZERO_SUM: "eta",
    Predicate.TINY_ZERO_SUM: "t",
    Predicate.PAIR: "eta_pair",
}


def max_avoiding(problem: AvoidanceProblem, config: SearchConfig | None = None) -> ExactResult:
    """Exact maximum of the objective over avoiding sequences, with witness.

    The witness is the first optimal node in search order, so it does not
    depend on the number of workers.  If the node budget runs out the
    result carries the best value seen and ``exact=False``.
    """
    config = config or SearchConfig()
    t0 = time.perf_counter()
    inst = _Instance(problem, config.symmetry)
    kind = _choose_kernel(inst, config.kernel)
    tt_bits = _tt_bits(inst, config.tt_bits)
    if config.workers <= 1:
        empty = ([0] * (inst.B + 1), 0, 1 << 40, -1, 0)
        best, picks, nodes, complete = _run(inst, kind, empty, inst.rootmask, config.budget, tt_bits)
    else:
        branches = _root_branches(inst)
        jobs = [(problem, config.symmetry, kind, root, config.budget, tt_bits) for _, root in branches]
        best, picks, nodes, complete = 0, [], 1, True
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_branch_worker, jobs))
        for (first, _), (b, p, n, c) in zip(branches, results):
            nodes += n
            complete = complete and c
            if b > best:
                best, picks = b, [first] + p
        if best >= inst.cap:
            complete = True
    witness = inst.to_sequence(picks)
    if problem.objective is SearchObjective.MAX_SCALED_CROSS:
        value = Fraction(best, inst.H.exponent)
        name = "rho"
    else:
        value = best + 1
        name = _INVARIANT_NAMES[problem.predicate]
        if problem.predicate is Predicate.PAIR:
            name = f"eta_pair({problem.d_prime},{problem.d})"
    return ExactResult(name, problem.group, value, witness, nodes, time.perf_counter() - t0, complete, kind, problem)
