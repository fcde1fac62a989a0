"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are
collected in the terminal summary.
"""

import io
import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import brute_exists, lemke_valid
from test_groups import small_groups
from zerosum.arith import f_values_upto, factorize, primes_lemma_scan
from zerosum.bounds import (
    ConstantRegistry,
    davenport_formula,
    eta_lower_bound_for,
    exact_pair_source,
    rho_gs_bound,
    rho_polytope_bound,
    t_linear_bound,
    t_main_bound,
    upsilon_group,
)
from zerosum.cli import main as cli_main
from zerosum.constructions import homocyclic_eta_extremal
from zerosum.exact import SearchConfig, davenport_exact, eta_exact, eta_pair_exact, rho_exact, t_exact
from zerosum.finder import solve_erdos_lemke_batch
from zerosum.groups import FiniteAbelianGroup, element_order
from zerosum.sequences import GSequence, has_pair_subsequence, has_short_zero_sum, has_tiny_zero_sum

ONE = SearchConfig(workers=1)
REG = ConstantRegistry()


@contextmanager
def criterion(num, label, limit=None):
    """Record PASS/FAIL for a criterion; the body collects failures in a list."""
    failures: list[str] = []
    t0 = time.perf_counter()
    try:
        yield failures
    except Exception as e:  # noqa: BLE001 - reported, then re-raised below
        failures.append(f"{type(e).__name__}: {e}")
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        failures.append(f"took {dt:.1f}s, limit {limit}s")
    status = "PASS" if not failures else "FAIL"
    detail = "" if not failures else f" [{'; '.join(failures[:3])}]"
    line = f"{status} criterion {num}: {label} ({dt:.1f}s){detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, line


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def test_01_cyclic_exactness():
    with criterion(1, "t(C_n) = eta(C_n) = n for 2 <= n <= 12", limit=10) as bad:
        for n in range(2, 13):
            G = FiniteAbelianGroup((n,))
            t, eta = t_exact(G, ONE), eta_exact(G, ONE)
            if not (t.exact and eta.exact and t.value == eta.value == n):
                bad.append(f"C{n}: t={t.value} eta={eta.value}")


def test_02_rank_two_eta():
    with criterion(2, "eta(C_m + C_n) = 2m + n - 2", limit=120) as bad:
        for m, n in [(2, 2), (2, 4), (3, 3), (2, 6)]:
            r = eta_exact(FiniteAbelianGroup((m, n)), ONE)
            if not (r.exact and r.value == 2 * m + n - 2):
                bad.append(f"C{m}xC{n}: {r.value}")


def test_03_elementary_two_groups():
    with criterion(3, "t(C_2^r) = 2^r for r = 1..4 (r = 4 is the stretch target)", limit=60) as bad:
        for r in range(1, 5):
            res = t_exact(FiniteAbelianGroup((2,) * r), ONE)
            if not (res.exact and res.value == 2**r):
                bad.append(f"r={r}: {res.value}")


def test_04_rank_two_pgroup_t():
    with criterion(4, "t(C_p + C_p) = 3p - 2 for p in {2, 3}", limit=300) as bad:
        for p in (2, 3):
            r = t_exact(FiniteAbelianGroup((p, p)), ONE)
            if not (r.exact and r.value == 3 * p - 2):
                bad.append(f"p={p}: {r.value}")


def test_05_davenport_pgroups():
    pgroups = [f for f in small_groups(64) if len(factorize(f[-1])) == 1]
    with criterion(5, f"D exact = p-group formula on all {len(pgroups)} p-groups of order <= 64", limit=300) as bad:
        for f in pgroups:
            G = FiniteAbelianGroup(f)
            r = davenport_exact(G, SearchConfig())
            if not (r.exact and r.value == davenport_formula(G)):
                bad.append(f"{G}: {r.value} vs {davenport_formula(G)}")


def test_06_upsilon_reduction():
    gs = small_groups(32)
    count = 0
    with criterion(6, f"eta_(d',d)(G) = eta(upsilon group) on all {len(gs)} groups of order <= 32", limit=600) as bad:
        for f in gs:
            G = FiniteAbelianGroup(f)
            for d in _divisors(G.exponent):
                for dp in _divisors(d):
                    a = eta_pair_exact(G, dp, d, ONE)
                    b = eta_exact(upsilon_group(G, dp, d), ONE)
                    count += 1
                    if not (a.exact and b.exact and a.value == b.value):
                        bad.append(f"{G} ({dp},{d}): {a.value} vs {b.value}")
    assert count > 0


def test_07_sandwich():
    gs = [f for f in small_groups(36) if len(f) <= 2]
    with criterion(7, f"lower <= eta <= t <= main <= linear, t <= |G| on {len(gs)} groups", limit=600) as bad:
        for f in gs:
            G = FiniteAbelianGroup(f)
            eta, t = eta_exact(G, ONE), t_exact(G, ONE)
            chain = [eta_lower_bound_for(G), eta.value, t.value, t_main_bound(G, REG),
                     t_linear_bound(G.rank, G.exponent, REG)]
            if not (eta.exact and t.exact and chain == sorted(chain) and t.value <= G.order):
                bad.append(f"{G}: {chain}")


def test_08_rho():
    gs = small_groups(16)
    with criterion(8, f"rho(C_2) = 1/2, rho(C_3) = 2/3, rho <= polytope <= GS on {len(gs)} groups", limit=600) as bad:
        for n, v in ((2, Fraction(1, 2)), (3, Fraction(2, 3))):
            r = rho_exact(FiniteAbelianGroup((n,)), ONE)
            if r.value != v:
                bad.append(f"rho(C{n}) = {r.value}")
        src = exact_pair_source(ONE)
        for f in gs:
            G = FiniteAbelianGroup(f)
            r = rho_exact(G, ONE)
            pol, gsb = rho_polytope_bound(G, src), rho_gs_bound(G)
            if not (r.exact and r.value <= pol <= gsb):
                bad.append(f"{G}: {r.value}, {pol}, {gsb}")


def test_09_arithmetic():
    with criterion(9, "f(n) <= n for n <= 10^6 and the primes inequality for l <= 10^4", limit=60) as bad:
        f = f_values_upto(10**6)
        n = np.arange(len(f), dtype=np.int64)
        over = np.nonzero(f[1:] > n[1:])[0] + 1
        if len(over):
            bad.append(f"f(n) > n at {over[:5].tolist()}")
        fails = [ell for ell, _, holds in primes_lemma_scan(10**4) if not holds]
        if fails:
            bad.append(f"primes inequality fails at {fails[:5]}")


def test_10_erdos_lemke():
    rng = np.random.default_rng(2024)
    with criterion(10, "Erdos-Lemke solver valid on 10^4 random instances per n in 2..200", limit=120) as bad:
        for n in range(2, 201):
            vals = rng.integers(-10**9, 10**9, size=(10**4, n))
            # a fifth of the rows from small divisors of n, where gcds are large
            k = 2 * 10**3
            divs = np.array(_divisors(n), dtype=np.int64)
            vals[:k] = divs[rng.integers(0, len(divs), size=(k, n))] * rng.integers(1, 5, size=(k, n))
            ok = lemke_valid(vals, n, solve_erdos_lemke_batch(vals, n))
            if not ok.all():
                bad.append(f"n={n}: {int((~ok).sum())} invalid")


def test_11_gap_certificate():
    with criterion(11, "gap certificate for r = 4: eta(G) <= 23 < 31 <= eta(H)", limit=5) as bad:
        out = io.StringIO()
        code = cli_main(["gap", "4"], out=out)
        js = json.loads(out.getvalue())
        if code != 0 or (js["eta_G_upper"], js["eta_H_lower"]) != (23, 31) or not js["holds"]:
            bad.append(str(js))
        if js["conclusion"] != "t(C3xC3xC3xC9) > eta(C3xC3xC3xC9)":
            bad.append(js["conclusion"])


def test_12_dp_oracle_equivalence():
    rng = random.Random(99)
    gs = [FiniteAbelianGroup(f) for f in small_groups(16)]
    with criterion(12, "tiny/short/pair DP = enumeration on 10^4 random sequences", limit=120) as bad:
        for _ in range(10**4):
            G = rng.choice(gs)
            divs = _divisors(G.exponent)
            d = rng.choice(divs)
            dp = rng.choice(_divisors(d))
            L = rng.randint(0, 12)
            picks = [rng.choice(G.elements) for _ in range(L)]
            S = GSequence.from_elements(G, picks)
            coords = [g.coords for g in picks]
            f = G.invariant_factors
            if (has_tiny_zero_sum(S) is not None) != brute_exists(f, coords, "tiny"):
                bad.append(f"tiny {G} {S.literal()}")
            if (has_short_zero_sum(S) is not None) != brute_exists(f, coords, "short"):
                bad.append(f"short {G} {S.literal()}")
            sub = [g for g in picks if d % element_order(G, g) == 0]
            T = GSequence.from_elements(G, sub)
            pc = [g.coords for g in sub]
            if (has_pair_subsequence(T, dp, d) is not None) != brute_exists(f, pc, "pair", dp, d):
                bad.append(f"pair({dp},{d}) {G} {T.literal()}")


def test_13_constructions():
    params = [(1, n) for n in range(2, 9)] + [(2, n) for n in range(2, 6)] + [(3, 2), (3, 3)]
    with criterion(13, "homocyclic constructions verified with length (2^r - 1)(n - 1)", limit=60) as bad:
        for r, n in params:
            rec = homocyclic_eta_extremal(r, n)
            if not (rec.verified and rec.sequence.length == (2**r - 1) * (n - 1)):
                bad.append(f"({r},{n})")
