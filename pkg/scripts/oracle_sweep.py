"""Compare the algorithm's guard count with the brute-force bracket on
small corpus instances and on the macuahuitl family.

    python3 scripts/oracle_sweep.py --seeds 1 500 --max-cells 48
"""

from __future__ import annotations

import argparse
from collections import Counter

from orthoguard.generators import corpus, gen_macuahuitl
from orthoguard.oracle import min_guards
from orthoguard.placement import bound, place_guards


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", nargs=2, type=int, default=[1, 500], metavar=("FIRST", "LAST"))
    ap.add_argument("--max-cells", type=int, default=48)
    ap.add_argument("--family-k", type=int, default=4, help="check macuahuitl k=1..K")
    args = ap.parse_args()

    for k in range(1, args.family_k + 1):
        b = min_guards(gen_macuahuitl(k))
        print(f"macuahuitl k={k} {b.report_line()}")

    gaps = Counter()
    for seed, P in corpus(range(args.seeds[0], args.seeds[1] + 1)):
        if len(P.cells) > args.max_cells:
            continue
        b = min_guards(P, max_cells=args.max_cells)
        g = len(place_guards(P).guards)
        cap = bound(P.n) if P.n >= 12 else 1
        gaps[(g - b.upper, b.basis)] += 1
        print(f"seed={seed} n={P.n} cells={len(P.cells)} guards={g} bound={cap} {b.report_line()}")
    for (gap, basis), count in sorted(gaps.items()):
        print(f"GAP guards-minus-upper={gap} basis={basis} instances={count}")


if __name__ == "__main__":
    main()
