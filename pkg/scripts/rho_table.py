"""Table of rho(G) against its upper bounds for small groups.

    python scripts/rho_table.py --max-order 24
"""

import argparse

from zerosum.bounds import ConstantRegistry, exact_pair_source, rho_divisor_bound, rho_gs_bound, rho_polytope_bound
from zerosum.exact import rho_exact
from zerosum.groups import FiniteAbelianGroup

from conjecture_scan import chains


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=16)
    args = ap.parse_args()

    reg = ConstantRegistry()
    src = exact_pair_source()
    print(f"{'group':<14}{'rho':>8}{'polytope':>10}{'divisor':>10}{'GS':>8}")
    for f in chains(args.max_order, 2):
        G = FiniteAbelianGroup(f)
        rho = rho_exact(G)
        pol = rho_polytope_bound(G, src)
        div = rho_divisor_bound(G.rank, G.exponent, reg)
        mark = "" if rho.exact else " (partial)"
        print(f"{str(G):<14}{str(rho.value):>8}{str(pol):>10}{str(div):>10}{str(rho_gs_bound(G)):>8}{mark}")


if __name__ == "__main__":
    main()
