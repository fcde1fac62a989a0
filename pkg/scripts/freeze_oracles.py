"""Recompute the brute-force reference values stored in tests/data.

    PYTHONPATH=tests python scripts/freeze_oracles.py

Only the enumeration oracle in tests/oracles.py is used here, never the
search engine, so the frozen values are an independent check on it.
"""

import json
import time
from pathlib import Path

from oracles import brute_max_avoiding

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "oracle_values.json"

GROUPS = [(n,) for n in range(2, 9)] + [(2, 2), (2, 4), (3, 3), (2, 2, 2), (2, 6)]
RHO_GROUPS = [(n,) for n in range(2, 9)] + [(2, 2), (2, 4), (2, 2, 2)]
PAIRS = [((2, 4), 2, 4), ((2, 4), 2, 2), ((6,), 2, 6), ((6,), 3, 6), ((2, 6), 2, 6),
         ((2, 6), 3, 6), ((4, 4), 2, 4), ((4,), 2, 4), ((8,), 4, 8), ((2, 2), 2, 2)]


def main():
    rows = []
    for fs in GROUPS:
        for name, kind in (("D", "zero"), ("eta", "short"), ("t", "tiny")):
            t0 = time.time()
            v = brute_max_avoiding(fs, kind)
            rows.append({"group": list(fs), "invariant": name, "value": v})
            print(fs, name, v, f"{time.time() - t0:.1f}s", flush=True)
    for fs in RHO_GROUPS:
        v = brute_max_avoiding(fs, "tiny", objective="cross")
        rows.append({"group": list(fs), "invariant": "rho", "value": [v.numerator, v.denominator]})
        print(fs, "rho", v, flush=True)
    for fs, dp, d in PAIRS:
        v = brute_max_avoiding(fs, "pair", dp, d)
        rows.append({"group": list(fs), "invariant": f"eta_pair({dp},{d})", "value": v})
        print(fs, dp, d, v, flush=True)
    OUT.write_text(json.dumps(rows, indent=1) + "\n")


if __name__ == "__main__":
    main()
