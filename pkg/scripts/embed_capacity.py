#!/usr/bin/env python3
"""Smallest line window that hosts the free-group embedding for each ball radius L.

The disjoint paths need ``sum(2|w|+1)`` interior points over the nontrivial
words of length at most L; the script reports that count, the first radius
where ``embed_f2`` succeeds and whether the certificate passes there.
"""
import argparse

from cptk.coarse import make_window
from cptk.embeddings import CapacityError, embed_f2
from cptk.free_group import enumerate_ball


def needed(L):
    return sum(2 * len(w) + 1 for w in enumerate_ball(L) if not w.is_identity)


def main(argv=None):
    ap = argparse.ArgumentParser(description="embedding capacity on line windows")
    ap.add_argument("--max-L", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'L':>2} {'words':>6} {'points':>7} {'radius':>7}  report")
    for L in range(1, args.max_L + 1):
        words = len(enumerate_ball(L)) - 1
        need = needed(L)
        r = max(2, (need + 1) // 2)  # interior of radius r has 2r - 1 points
        while True:
            try:
                emb = embed_f2(make_window("line", r), L)
                break
            except CapacityError:
                r += 1
        print(f"{L:>2} {words:>6} {need:>7} {r:>7}  {emb.report.status}")


if __name__ == "__main__":
    main()
