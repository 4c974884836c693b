#!/usr/bin/env python3
"""Run the acceptance suite and print one pass/fail line per criterion.

Usage: python3 scripts/run_acceptance.py [--only 1,4,9]
Exit status is 0 only when every selected criterion passes.
"""

from __future__ import annotations

import argparse
import sys

from ghz4.acceptance import run_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", default=None)
    args = ap.parse_args()
    only = {int(t) for t in args.only.split(",")} if args.only else None
    res = run_all(only)
    n_ok = sum(c.passed for c in res)
    print(f"{n_ok}/{len(res)} criteria passed")
    return 0 if n_ok == len(res) else 1


if __name__ == "__main__":
    sys.exit(main())
