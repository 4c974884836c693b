#!/usr/bin/env python3
"""Write boundary CSVs and hull OBJ/JSON files for every solved class.

Usage: python3 scripts/export_surfaces.py [--grid N] [--out DIR]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from ghz4.cli import to_json17
from ghz4.region import class_hull, sample_surface
from ghz4.slocc import SOLVED


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--out", default="exports")
    ap.add_argument("--no-hull", action="store_true")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for cls in SOLVED:
        g = sample_surface(cls, args.grid)
        (out / f"{cls.value}_surface.csv").write_text(g.to_csv(), encoding="utf-8")
        line = f"{cls.value:8s} {len(g.samples)} samples, {int(g.empty.sum())} empty"
        if not args.no_hull:
            h = class_hull(cls, args.grid)
            (out / f"{cls.value}_hull.obj").write_text(h.to_obj(), encoding="utf-8")
            (out / f"{cls.value}_hull.json").write_text(to_json17(h.to_json()), encoding="utf-8")
            line += f"; hull {len(h.vertices)} vertices, volume {h.volume:.6g}"
        print(line)


if __name__ == "__main__":
    main()
