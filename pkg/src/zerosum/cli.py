"""Command-line interface.

Exit codes: 0 exact / verified, 1 usage or configuration error,
2 partial result (node budget exhausted), 3 a verification or
consistency check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import arith
from .bounds import (
    ConstantRegistry,
    MissingConstant,
    ReportOptions,
    bound_report,
    eta_lower_bound_for,
    rank_gap_certificate,
    t_linear_bound,
    t_main_bound,
)
from .constructions import homocyclic_eta_extremal, rank_two_eta_extremal
from .exact import SearchConfig, davenport_exact, eta_exact, eta_pair_exact, rho_exact, t_exact
from .finder import solve_erdos_lemke
from .groups import FiniteAbelianGroup, GroupSpecError, parse_group

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    group: str | None = None
    command: str = ""
    c_r: dict[int, Fraction] = field(default_factory=dict)
    budget: int = 10**9
    workers: int = os.cpu_count() or 1
    format: str = "json"
    seed: int = 0

    def registry(self) -> ConstantRegistry:
        return ConstantRegistry(self.c_r)

    def search(self) -> SearchConfig:
        return SearchConfig(budget=self.budget, workers=self.workers)


def _parse_constant(text: str) -> tuple[int, Fraction]:
    m = re.fullmatch(r"\s*(\d+)\s*=\s*([0-9/.]+)\s*", text)
    if not m:
        raise UsageError(f"--c-r expects rank=value, got {text!r}")
    return int(m.group(1)), Fraction(m.group(2))


def _config(args) -> RunConfig:
    cr = {}
    for item in args.c_r or []:
        r, v = _parse_constant(item)
        cr[r] = v
    if args.c3 is not None:
        cr[3] = Fraction(args.c3)
    cfg = RunConfig(
        group=getattr(args, "group", None),
        command=args.command,
        c_r=cr,
        budget=args.budget,
        workers=args.workers if args.workers is not None else (os.cpu_count() or 1),
        format=args.format or ("csv" if args.command == "scan" else "json"),
        seed=args.seed,
    )
    try:
        cfg.registry()
    except ValueError as e:
        raise UsageError(str(e)) from None
    return cfg


def _group(cfg: RunConfig) -> FiniteAbelianGroup:
    if not cfg.group:
        raise UsageError("--group is required")
    try:
        return parse_group(cfg.group)
    except GroupSpecError as e:
        raise UsageError(str(e)) from None


def _emit(obj, cfg: RunConfig, out) -> None:
    if cfg.format == "json":
        json.dump(obj, out, indent=2)
        out.write("\n")
    elif cfg.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        flat = {k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in obj.items()}
        w.writerow(flat.keys())
        w.writerow(flat.values())
    else:
        for k, v in obj.items():
            out.write(f"{k}: {v}\n")


_PAIR_RE = re.compile(r"eta_pair\((\d+),(\d+)\)")


def cmd_invariant(cfg: RunConfig, which: str, out) -> int:
    G = _group(cfg)
    sc = cfg.search()
    m = _PAIR_RE.fullmatch(which.replace(" ", ""))
    if m:
        try:
            res = eta_pair_exact(G, int(m.group(1)), int(m.group(2)), sc)
        except ValueError as e:
            raise UsageError(str(e)) from None
    else:
        fns = {"D": davenport_exact, "eta": eta_exact, "t": t_exact, "rho": rho_exact}
        if which not in fns:
            raise UsageError(f"unknown invariant {which!r}; choose D, eta, t, rho or eta_pair(d',d)")
        res = fns[which](G, sc)
    _emit(res.to_json(), cfg, out)
    return EXIT_OK if res.exact else EXIT_PARTIAL


def cmd_bounds(cfg: RunConfig, pair_source: str, out) -> int:
    G = _group(cfg)
    try:
        rep = bound_report(G, cfg.registry(), ReportOptions(pair_source=pair_source, config=cfg.search()))
    except MissingConstant as e:
        raise UsageError(f"{e}; supply it with --c{G.rank} VALUE or --c-r {G.rank}=VALUE") from None
    if cfg.format == "csv":
        out.write(rep.to_csv())
    else:
        _emit(rep.to_json(), cfg, out)
    if not rep.all_consistent:
        return EXIT_FAILED
    partial = any(not ok for ok in rep.exact_complete.values())
    return EXIT_PARTIAL if partial else EXIT_OK


def _read_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in re.split(r"[\s,]+", text.strip()) if t]
    except ValueError:
        raise UsageError("lemke input must be integers") from None


def cmd_lemke(cfg: RunConfig, n: int | None, values_text: str, out) -> int:
    nums = _read_ints(values_text)
    if n is None:
        if not nums:
            raise UsageError("no input")
        n, nums = nums[0], nums[1:]
    if n < 1:
        raise UsageError("n must be positive")
    if len(nums) != n:
        raise UsageError(f"expected {n} values, got {len(nums)}")
    sol = solve_erdos_lemke(nums, n)
    if cfg.format == "plain":
        out.write(" ".join(map(str, sol.indices)) + "\n")
        out.write(f"sum {sol.sum_check}\ngcd_budget {sol.gcd_budget}\n")
    else:
        _emit(sol.to_json(), cfg, out)
    return EXIT_OK if sol.valid else EXIT_FAILED


def cmd_construct(cfg: RunConfig, kind: str, a: int, b: int, verify: bool, out) -> int:
    try:
        if kind == "homocyclic":
            rec = homocyclic_eta_extremal(a, b, verify=verify)
        elif kind == "rank2":
            rec = rank_two_eta_extremal(a, b, verify=verify)
        else:
            raise UsageError(f"unknown construction {kind!r}")
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit(rec.to_json(), cfg, out)
    return EXIT_FAILED if verify and not rec.verified else EXIT_OK


def _parse_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m:
        raise UsageError(f"range must look like lo..hi, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise UsageError("empty range")
    return lo, hi


SCAN_COLUMNS = [
    "group", "order", "rank", "exponent", "D", "eta", "t", "rho_num", "rho_den", "exact",
    "lower_bound", "t_main_bound", "t_linear_bound", "cardinality", "t_equals_eta", "consistent",
]


def _scan_row(G: FiniteAbelianGroup, cfg: RunConfig) -> dict:
    sc = cfg.search()
    res = {name: fn(G, sc) for name, fn in
           (("D", davenport_exact), ("eta", eta_exact), ("t", t_exact), ("rho", rho_exact))}
    exact = all(r.exact for r in res.values())
    reg = cfg.registry()
    main = t_main_bound(G, reg) if G.rank == 0 or reg.has(G.rank) else None
    lin = t_linear_bound(G.rank, G.exponent, reg) if G.rank == 0 or reg.has(G.rank) else None
    low = eta_lower_bound_for(G)
    D, eta, t = res["D"].value, res["eta"].value, res["t"].value
    rho = res["rho"].value
    ok = low <= eta <= t <= G.order and D <= eta
    if main is not None:
        ok = ok and t <= main <= lin
    return {
        "group": str(G), "order": G.order, "rank": G.rank, "exponent": G.exponent,
        "D": D, "eta": eta, "t": t, "rho_num": rho.numerator, "rho_den": rho.denominator,
        "exact": exact, "lower_bound": low, "t_main_bound": main, "t_linear_bound": lin,
        "cardinality": G.order, "t_equals_eta": t == eta, "consistent": ok if exact else None,
    }


def scan_groups(family: str, lo: int, hi: int, rank: int) -> list[FiniteAbelianGroup]:
    if family == "cyclic":
        return [FiniteAbelianGroup((n,)) for n in range(max(lo, 2), hi + 1)]
    if family == "rank2":
        out = []
        for order in range(max(lo, 4), hi + 1):
            for m in range(2, int(order**0.5) + 1):
                if order % m == 0 and (order // m) % m == 0:
                    out.append(FiniteAbelianGroup((m, order // m)))
        return out
    if family == "homocyclic":
        return [FiniteAbelianGroup((n,) * rank) for n in range(max(lo, 2), hi + 1)]
    raise UsageError(f"unknown scan family {family!r}")


def cmd_scan(cfg: RunConfig, family: str, range_text: str, rank: int, out) -> int:
    lo, hi = _parse_range(range_text)
    if family == "f_function":
        bad = arith.write_f_scan_csv(lo, hi, out)
        print(f"f(n) > n violations: {bad}", file=sys.stderr)
        return EXIT_FAILED if bad else EXIT_OK
    if family == "primes_lemma":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["ell", "product_num", "product_den", "p_next_minus_1", "holds"])
        bad = 0
        for ell, bound, holds in arith.primes_lemma_scan(hi):
            if ell < lo:
                continue
            if ell <= 200:
                prod, _, _ = arith.primes_product_inequality(ell)
                w.writerow([ell, prod.numerator, prod.denominator, bound, holds])
            else:
                w.writerow([ell, "", "", bound, holds])
            bad += not holds
        print(f"primes inequality violations: {bad}", file=sys.stderr)
        return EXIT_FAILED if bad else EXIT_OK
    groups = scan_groups(family, lo, hi, rank)
    rows = [_scan_row(G, cfg) for G in groups]
    if cfg.format == "json":
        json.dump({"schema": 1, "family": family, "rows": rows}, out, indent=2)
        out.write("\n")
    else:
        w = csv.DictWriter(out, SCAN_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: ("" if v is None else v) for k, v in row.items()})
    if any(r["consistent"] is False for r in rows):
        return EXIT_FAILED
    return EXIT_PARTIAL if not all(r["exact"] for r in rows) else EXIT_OK


def cmd_gap(cfg: RunConfig, r: int, out) -> int:
    try:
        cert = rank_gap_certificate(r)
    except ValueError as e:
        raise UsageError(f"{e} (whether t(G) = eta(G) for every rank-three group is not known)") from None
    _emit(cert.to_json(), cfg, out)
    return EXIT_OK if cert.chain_holds else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--group", help='group, e.g. "C2xC4" or "[2,4]"')
    common.add_argument("--c3", default=None, help="value of c_3")
    common.add_argument("--c-r", action="append", metavar="RANK=VALUE", help="value of c_r (repeatable)")
    common.add_argument("--budget", type=int, default=10**9, help="search node budget")
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count)")
    common.add_argument("--format", choices=["json", "csv", "plain"], default=None)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="zerosum", description="Zero-sum invariants of finite Abelian groups")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("invariant", parents=[common], help="exact D, eta, t, rho or eta_pair(d',d)")
    s.add_argument("which")

    s = sub.add_parser("bounds", parents=[common], help="bound report with consistency flags")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="pair_source", action="store_const", const="exact")
    g.add_argument("--bounded", dest="pair_source", action="store_const", const="bounded")
    s.set_defaults(pair_source="exact")

    s = sub.add_parser("lemke", parents=[common], help="solve the Erdos-Lemke divisor problem")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--values", default=None, help="integers separated by spaces or commas")
    s.add_argument("--file", default=None, help="read input from a file (default stdin)")

    s = sub.add_parser("construct", parents=[common], help="extremal constructions")
    s.add_argument("kind", choices=["homocyclic", "rank2"])
    s.add_argument("a", type=int, help="r (homocyclic) or m (rank2)")
    s.add_argument("b", type=int, help="n")
    s.add_argument("--verify", action="store_true")

    s = sub.add_parser("scan", parents=[common], help="batch scans")
    s.add_argument("family", choices=["cyclic", "rank2", "homocyclic", "f_function", "primes_lemma"])
    s.add_argument("range", help="lo..hi")
    s.add_argument("--rank", type=int, default=2, help="rank for the homocyclic family")

    s = sub.add_parser("gap", parents=[common], help="rank >= 4 certificate that t > eta")
    s.add_argument("r", type=int)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "invariant":
            return cmd_invariant(cfg, args.which, out)
        if args.command == "bounds":
            return cmd_bounds(cfg, args.pair_source, out)
        if args.command == "lemke":
            if args.values is not None:
                text = args.values
            elif args.file:
                with open(args.file) as fh:
                    text = fh.read()
            else:
                text = sys.stdin.read()
            return cmd_lemke(cfg, args.n, text, out)
        if args.command == "construct":
            return cmd_construct(cfg, args.kind, args.a, args.b, args.verify, out)
        if args.command == "scan":
            return cmd_scan(cfg, args.family, args.range, args.rank, out)
        if args.command == "gap":
            return cmd_gap(cfg, args.r, out)
    except UsageError as e:
        print(f"zerosum: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
