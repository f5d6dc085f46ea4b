#!/usr/bin/env python3
"""How much of a tree(4) window the forest certificate covers, by radius.

For each radius the harem map is built on the canonical window and on a few
seeded relabelings; the table lists window size, harem core, certified
region and how many cycles were spliced versus kept.
"""
import argparse
import random

from cptk.coarse import make_window, permute_window
from cptk.harem import harem_matching
from cptk.whyte import eliminate_periodic, periodic_points, verify_forest


def row(window, d):
    f = harem_matching(window, window.relation.minus_diagonal(), d)
    elim = eliminate_periodic(f)
    rep = verify_forest(elim.f_star, window, d, elim.certified_region)
    _, cycles = periodic_points(f)
    spliced = len(elim.rays.p0) - len(elim.rays.abandoned)
    return len(f.certified), len(elim.certified_region), len(cycles), spliced, rep.status


def main(argv=None):
    ap = argparse.ArgumentParser(description="certified region size versus window radius")
    ap.add_argument("--radii", type=int, nargs="+", default=[3, 4, 5, 6, 7])
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--relabelings", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    print(f"{'radius':>6} {'run':>4} {'points':>7} {'core':>6} {'region':>7} {'cycles':>7} {'spliced':>8}  check")
    for r in args.radii:
        base = make_window("tree4", r)
        rng = random.Random(args.seed + r)
        for k in range(args.relabelings + 1):
            w = base
            if k:
                perm = list(range(base.size))
                rng.shuffle(perm)
                w = permute_window(base, perm)
            core, region, cycles, spliced, status = row(w, args.d)
            print(f"{r:>6} {k:>4} {w.size:>7} {core:>6} {region:>7} {cycles:>7} {spliced:>8}  {status}")


if __name__ == "__main__":
    main()
