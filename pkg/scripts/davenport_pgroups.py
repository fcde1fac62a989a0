"""Exact Davenport constants of p-groups against the closed formula.

    python scripts/davenport_pgroups.py --max-order 64 --workers 4
"""

import argparse
import time

from zerosum.arith import factorize
from zerosum.bounds import davenport_formula
from zerosum.exact import SearchConfig, davenport_exact
from zerosum.groups import FiniteAbelianGroup

from conjecture_scan import chains


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=64)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    cfg = SearchConfig(workers=args.workers)
    bad = 0
    for f in chains(args.max_order, 6):
        if len(factorize(f[-1])) != 1:
            continue
        G = FiniteAbelianGroup(f)
        t0 = time.perf_counter()
        r = davenport_exact(G, cfg)
        ok = r.exact and r.value == davenport_formula(G)
        bad += not ok
        print(f"{str(G):<22} D={r.value:<4} formula={davenport_formula(G):<4} "
              f"{'ok' if ok else 'MISMATCH'}  {time.perf_counter() - t0:6.2f}s  nodes={r.nodes_explored}")
    print(f"mismatches: {bad}")


if __name__ == "__main__":
    main()
