"""Compare t(G) with eta(G) on every abelian group up to a given order.

Equality is expected for small rank; the scan reports any group where
t exceeds eta, together with the extremal witness for t.  Nothing here
is asserted; the output is a CSV for inspection.

    python scripts/conjecture_scan.py --max-order 48 --max-rank 3
"""

import argparse
import csv
import sys

from zerosum.exact import SearchConfig, eta_exact, t_exact
from zerosum.groups import FiniteAbelianGroup


def chains(max_order, max_rank):
    out = []

    def extend(chain, order):
        if chain:
            out.append(tuple(chain))
        if len(chain) == max_rank:
            return
        last = chain[-1] if chain else 1
        m = max(last, 2)
        while order * m <= max_order:
            if m % last == 0:
                extend(chain + [m], order * m)
            m += 1

    extend([], 1)
    return sorted(out, key=lambda f: (len(f), f))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=36)
    ap.add_argument("--max-rank", type=int, default=3)
    ap.add_argument("--budget", type=int, default=10**8)
    args = ap.parse_args()

    cfg = SearchConfig(budget=args.budget)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["group", "order", "rank", "eta", "t", "exact", "t_witness"])
    gaps = 0
    for f in chains(args.max_order, args.max_rank):
        G = FiniteAbelianGroup(f)
        e, t = eta_exact(G, cfg), t_exact(G, cfg)
        exact = e.exact and t.exact
        w.writerow([G, G.order, G.rank, e.value, t.value, exact, t.extremal_witness.literal()])
        sys.stdout.flush()
        gaps += exact and t.value > e.value
    print(f"groups with t > eta: {gaps}", file=sys.stderr)


if __name__ == "__main__":
    main()
