#!/usr/bin/env python3
"""Run every acceptance suite and print one PASS/FAIL line per suite.

Exit status is 0 only when all suites pass.  ``--json`` dumps the full
reports instead.
"""
import argparse
import json
import sys
import time

from cptk.config import DEFAULT_SEED, Budget
from cptk.suites import SUITES, run_suite


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--only", nargs="*", choices=sorted(SUITES), default=None)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    budget = Budget.from_env()
    names = args.only or list(SUITES)
    reports = []
    for name in names:
        t0 = time.perf_counter()
        rep = run_suite(name, args.seed, budget)
        dt = time.perf_counter() - t0
        reports.append(rep)
        if not args.json:
            print(f"{rep.status}  {name:<20} {dt:6.2f}s")
            if not rep.passed:
                print(f"      first violation: {rep.violations[0]}")
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2, default=str))
    else:
        passed = sum(r.passed for r in reports)
        print(f"{passed}/{len(reports)} suites passed (seed {args.seed})")
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
