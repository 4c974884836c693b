#!/usr/bin/env python3
"""Compare oracle maxima against the closed forms on an interior grid.

Prints one row per point: class, alphas, analytic reach, oracle value, status.
Rows where the oracle beats the analytic value by more than 5e-3 are flagged.

Usage: python3 scripts/oracle_sweep.py --class la4 [--grid 6] [--restarts 16]
"""

from __future__ import annotations

import argparse
import math

from ghz4 import boundaries as B
from ghz4.acceptance import interior_grid
from ghz4.oracle import OptimConfig, maximize_x
from ghz4.slocc import SOLVED, SloccClass
from ghz4.symstate import alphas_from_yz


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--class", dest="cls", default=None, help="one solved class (default: all)")
    ap.add_argument("--grid", type=int, default=6)
    ap.add_argument("--restarts", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    classes = [SloccClass.parse(args.cls)] if args.cls else list(SOLVED)
    cfg = OptimConfig(restarts=args.restarts, seed=args.seed)
    print(f"{'class':8s} {'a1':>8s} {'a2':>8s} {'a3':>8s} {'analytic':>10s} {'oracle':>10s}  status")
    for cls in classes:
        for y, z in interior_grid(args.grid):
            a = alphas_from_yz(y, z)
            reach = B.effective_xmax(cls, y, z).reach
            r = maximize_x(cls, y, z, cfg)
            flag = "  <-- exceeds" if r.success and r.x_best - reach > 5e-3 else ""
            an = "empty" if math.isinf(reach) else f"{reach:.6f}"
            ox = f"{r.x_best:.6f}" if r.success else "-"
            print(f"{cls.value:8s} {a[0]:8.5f} {a[1]:8.5f} {a[2]:8.5f} {an:>10s} {ox:>10s}  "
                  f"{r.status}{flag}")


if __name__ == "__main__":
    main()
