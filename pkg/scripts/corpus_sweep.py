"""Run the full pipeline over the random corpus and print one report line
per instance plus a summary.

    python3 scripts/corpus_sweep.py --seeds 1 500 [--max-columns 40]
"""

from __future__ import annotations

import argparse
import time
from collections import Counter

from orthoguard.decomposition import decompose
from orthoguard.generators import corpus
from orthoguard.placement import audit_ledger, bound, place_guards
from orthoguard.visibility import cell_coverage, union_covers, visibility_polygon


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", nargs=2, type=int, default=[1, 500], metavar=("FIRST", "LAST"))
    ap.add_argument("--max-columns", type=int, default=40)
    ap.add_argument("--cross-check", action="store_true", help="also run the cell-subdivision decider")
    args = ap.parse_args()

    stats = Counter()
    t0 = time.perf_counter()
    for seed, P in corpus(range(args.seeds[0], args.seeds[1] + 1), args.max_columns):
        D = decompose(P)
        L = place_guards(P, D)
        audit_ledger(L, D)
        vis = [visibility_polygon(P, g) for g in L.positions]
        cov = union_covers(P, L.positions, vis)
        cap = bound(P.n) if P.n >= 12 else 1
        stats["instances"] += 1
        stats["uncovered"] += not cov.covered
        stats["over_bound"] += len(L.guards) > cap
        stats["tight"] += len(L.guards) == cap
        stats["alternating"] += L.alternating
        for case in L.cases.values():
            stats[f"case_{case}"] += 1
        if args.cross_check:
            stats["decider_disagree"] += cell_coverage(P, vis).covered != cov.covered
        print(f"seed={seed} n={P.n} guards={len(L.guards)} bound={cap} "
              f"covered={'true' if cov.covered else 'false'}")
    stats["seconds"] = round(time.perf_counter() - t0)
    print("SUMMARY " + " ".join(f"{k}={v}" for k, v in sorted(stats.items())))


if __name__ == "__main__":
    main()
