import itertools
from fractions import Fraction
from math import gcd

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from strategies import groups
from test_groups import small_groups
from zerosum.arith import divisors
from zerosum.bounds import (
    ConstantRegistry,
    MissingConstant,
    Provenance,
    ReportOptions,
    bound_report,
    bounded_pair_source,
    davenport_formula,
    davenport_pgroup,
    eta_from_davenport,
    eta_lower_bound,
    eta_lower_bound_for,
    eta_pair_upper,
    eta_rank_two,
    exact_pair_source,
    polytope_caps,
    rank_gap_certificate,
    rho_divisor_bound,
    rho_gs_bound,
    rho_polytope_bound,
    t_linear_bound,
    t_main_bound,
    t_pgroup_bound,
    t_rank_two_pgroup,
    upsilon_factors,
    upsilon_group,
)
from zerosum.exact import eta_exact
from zerosum.groups import FiniteAbelianGroup, parse_group
from zerosum.report import load_schema

REG = ConstantRegistry()


def test_registry_defaults():
    assert REG.get(1) == 1 and REG.get(2) == 3
    assert REG.provenance(2) is Provenance.PROVEN
    assert not REG.has(3)
    with pytest.raises(MissingConstant, match="rank 3"):
        REG.get(3)


def test_registry_configure():
    reg = ConstantRegistry({3: "15/2"})
    assert reg.get(3) == Fraction(15, 2) and reg.provenance(3) is Provenance.CONFIGURED
    reg.set(2, 4)
    assert reg.provenance(2) is Provenance.CONFIGURED
    with pytest.raises(ValueError):
        reg.set(2, 2)  # below the proven value
    with pytest.raises(ValueError):
        reg.set(4, 0)
    with pytest.raises(ValueError):
        reg.set(0, 1)


def test_missing_constant_propagates():
    G = parse_group("C2xC2xC2")
    with pytest.raises(MissingConstant):
        t_main_bound(G, REG)
    with pytest.raises(MissingConstant):
        bound_report(G, REG)
    assert t_main_bound(G, ConstantRegistry({3: 7})) == 7 * 1 + 1


@pytest.mark.parametrize("n", range(2, 20))
def test_eta_lower_rank_one(n):
    assert eta_lower_bound(1, n) == n
    assert eta_rank_two(1, n) == n


def test_lower_bound_examples():
    assert eta_lower_bound(2, 3) == 7
    assert eta_lower_bound(4, 3) == 31
    assert eta_lower_bound_for(parse_group("C2xC6")) == 6
    assert eta_lower_bound_for(parse_group("C1")) == 1
    with pytest.raises(ValueError):
        eta_lower_bound(0, 3)


def test_rank_two_examples():
    assert eta_rank_two(2, 2) == 4 and eta_rank_two(3, 3) == 7
    with pytest.raises(ValueError):
        eta_rank_two(2, 3)


def test_davenport_examples():
    assert davenport_pgroup(2, [1, 1]) == 3
    assert davenport_pgroup(3, [1, 1, 1, 2]) == 15
    assert davenport_pgroup(5, [1]) == 5
    with pytest.raises(ValueError):
        davenport_pgroup(4, [1])
    assert davenport_formula(parse_group("C6")) is None


def test_upsilon_examples():
    G = parse_group("C2xC4")
    assert upsilon_factors(G, 2, 4) == [1, 2]
    assert upsilon_group(G, 2, 4).invariant_factors == (2,)
    H = parse_group("C4xC4")
    assert upsilon_group(H, 2, 4).invariant_factors == (2, 2)
    assert upsilon_factors(parse_group("C2xC12"), 6, 6) == [2, 6]


@settings(max_examples=60)
@given(groups(max_order=64, max_rank=3), st.data())
def test_upsilon_properties(G, data):
    if G.rank == 0:
        return
    e = G.exponent
    d = data.draw(st.sampled_from(divisors(e)))
    dp = data.draw(st.sampled_from(divisors(d)))
    ups = upsilon_factors(G, dp, d)
    assert ups[-1] == dp
    assert all(dp % u == 0 for u in ups)
    if all(n % d == 0 for n in G.invariant_factors):
        assert ups == [dp] * G.rank
    if dp == d:
        assert ups == [gcd(d, n) for n in G.invariant_factors]


def test_pair_upper_examples():
    assert eta_pair_upper(parse_group("C12"), 4, 12, REG) == 4
    assert eta_pair_upper(parse_group("C3xC6"), 3, 6, REG) == 7
    assert eta_pair_upper(parse_group("C3xC6"), 1, 6, REG) == 1


def test_main_bound_examples():
    assert t_main_bound(parse_group("C6"), REG) == 7
    assert t_main_bound(parse_group("C2xC2"), REG) == 4
    assert t_linear_bound(2, 2, REG) == 7
    assert t_linear_bound(2, 4, REG) == 19
    assert t_linear_bound(0, 1, REG) == 1
    for n in range(2, 40):
        assert t_linear_bound(1, n, REG) == 2 * n - 1


@pytest.mark.parametrize("r", [1, 2])
def test_main_below_linear(r):
    for n in range(2, 10**4 + 1):
        G = FiniteAbelianGroup((n,) * r)
        assert t_main_bound(G, REG) <= t_linear_bound(r, n, REG)


def test_pgroup_bounds():
    assert t_pgroup_bound(parse_group("C9"), REG) == 9
    assert t_pgroup_bound(parse_group("C3xC9"), REG) is None
    assert t_pgroup_bound(parse_group("C6"), REG) is None
    assert t_rank_two_pgroup(parse_group("C5xC5")) == 13
    assert t_rank_two_pgroup(parse_group("C2xC4")) is None


def test_rho_divisor_examples():
    assert rho_divisor_bound(1, 2, REG) == Fraction(1, 2)
    # the d = 6 term is (P-(6) - 1)/6 = 1/6
    assert rho_divisor_bound(1, 6, REG) == Fraction(1, 2) + Fraction(2, 3) + Fraction(1, 6)
    for p, a in [(2, 3), (3, 2), (5, 1), (7, 2)]:
        q = p**a
        assert rho_divisor_bound(1, q, REG) == Fraction(q - 1, q)
        assert rho_divisor_bound(2, q, REG) == 3 * Fraction(q - 1, q)


def test_rho_gs_examples():
    assert rho_gs_bound(parse_group("C2")) == 1
    assert rho_gs_bound(parse_group("C6")) == 3
    assert rho_gs_bound(parse_group("C3xC3")) == 3


def test_polytope_examples():
    exact = exact_pair_source()
    for p in (2, 3, 5, 7):
        assert rho_polytope_bound(parse_group(f"C{p}"), exact) == Fraction(p - 1, p)
    assert rho_polytope_bound(parse_group("C2xC2"), exact) == Fraction(3, 2)


@pytest.mark.parametrize("factors", [f for f in small_groups(64) if len(f) <= 2])
def test_polytope_with_bounded_source_is_divisor_bound(factors):
    G = FiniteAbelianGroup(factors)
    assert rho_polytope_bound(G, bounded_pair_source(REG)) == rho_divisor_bound(G.rank, G.exponent, REG)


@pytest.mark.parametrize("factors", [f for f in small_groups(24) if len(f) <= 2])
def test_exact_polytope_at_most_divisor_bound(factors):
    G = FiniteAbelianGroup(factors)
    assert rho_polytope_bound(G, exact_pair_source()) <= rho_divisor_bound(G.rank, G.exponent, REG)


def test_box_corner_is_the_maximum():
    # brute-force the linear program over the integer box for small groups
    for spec in ("C6", "C2xC4", "C12", "C2xC6"):
        G = parse_group(spec)
        caps = polytope_caps(G, exact_pair_source())
        assert caps[1] == 0
        ds = sorted(caps)
        best = max(
            sum(Fraction(x, d) for x, d in zip(xs, ds))
            for xs in itertools.product(*(range(int(caps[d]) + 1) for d in ds))
        )
        assert best == rho_polytope_bound(G, exact_pair_source())


def test_eta_from_davenport_examples():
    assert eta_from_davenport(parse_group("C3xC3xC3xC9")) == 23
    assert eta_from_davenport(parse_group("C2xC2")) == 4
    assert eta_from_davenport(parse_group("C2xC2xC2xC2xC2")) is None
    with pytest.raises(ValueError):
        eta_from_davenport(parse_group("C6"))


@pytest.mark.parametrize("spec", ["C2xC2", "C3xC3", "C9", "C2xC4", "C4xC4", "C3xC9", "C2xC2xC4"])
def test_eta_from_davenport_against_exact(spec):
    G = parse_group(spec)
    ub = eta_from_davenport(G)
    if ub is not None:
        assert eta_exact(G).value <= ub


def test_gap_certificates():
    c4 = rank_gap_certificate(4)
    assert (c4.alpha, c4.eta_G_upper, c4.eta_H_lower, c4.davenport_G) == (2, 23, 31, 15)
    assert c4.chain_holds and str(c4.G) == "C3xC3xC3xC9"
    c5 = rank_gap_certificate(5)
    assert c5.alpha_window == (2, 3) and c5.chain_holds
    for r in range(4, 16):
        c = rank_gap_certificate(r)
        assert c.chain_holds
        assert all(2 * r - 1 <= 3**a <= 2**r - r for a in c.alpha_window)
    with pytest.raises(ValueError, match="open"):
        rank_gap_certificate(3)
    jsonschema.validate(c4.to_json(), load_schema("gap"))


def test_report_c6():
    rep = bound_report(parse_group("C6"))
    assert rep.exact["t"] == 6 and rep.exact["rho"] == Fraction(4, 3)
    assert rep.value("lower_bound") == 6 and rep.value("cardinality_bound") == 6
    assert rep.value("t_main_bound") == 7
    assert rep.all_consistent


def test_report_klein():
    rep = bound_report(parse_group("C2xC2"))
    assert rep.exact["eta"] == rep.exact["t"] == 4
    assert rep.value("t_main_bound") == 4 and rep.value("t_linear_bound") == 7
    assert rep.all_consistent


def test_report_c3c3():
    rep = bound_report(parse_group("C3xC3"))
    assert rep.exact["t"] == rep.exact["eta"] == 7 == rep.value("t_rank_two")
    assert rep.value("rho_polytope_bound") == rep.exact["rho"] == 2
    assert rep.all_consistent


def test_report_flags_inconsistency():
    rep = bound_report(parse_group("C6"))
    entry = rep.entry("t_main_bound")
    entry.value = 5
    assert rep.consistent(entry) is False and not rep.all_consistent


def test_report_without_exact():
    rep = bound_report(parse_group("C2xC12"), options=ReportOptions(compute_exact=False, pair_source="bounded"))
    assert rep.exact == {} and rep.all_consistent
    assert rep.consistent(rep.entry("t_main_bound")) is None


def test_report_serialization():
    rep = bound_report(parse_group("C2xC4"))
    jsonschema.validate(rep.to_json(), load_schema("bounds"))
    lines = rep.to_csv().splitlines()
    assert lines[0] == "name,value_num,value_den,applicable,consistent"
    assert len(lines) == len(rep.entries) + 1

