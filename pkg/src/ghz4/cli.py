"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import boundaries as B
from .oracle import OptimConfig, maximize_x
from .region import check_hierarchy, class_hull, sample_surface
from .slocc import SOLVED, UNSUPPORTED_MSG, SloccClass, UnsupportedClassError
from .symstate import (is_physical, make_state, pure_state_from_json, to_density, to_point,
                       twirl)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3


class UsageError(Exception):
    pass


def to_json17(obj, indent: int = 2) -> str:
    # floats become marked strings, then the markers and quotes are stripped
    def conv(o):
        if isinstance(o, (float, np.floating)):
            o = float(o)
            if not math.isfinite(o):
                return "\x00" + ("NaN" if math.isnan(o) else ("Infinity" if o > 0 else "-Infinity")) + "\x00"
            return "\x00" + format(o, ".17g") + "\x00"
        if isinstance(o, dict):
            return {str(k): conv(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [conv(v) for v in o]
        if isinstance(o, np.ndarray):
            return conv(o.tolist())
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.bool_):
            return bool(o)
        return o

    return json.dumps(conv(obj), indent=indent).replace('"\\u0000', "").replace('\\u0000"', "")


def _g9(v) -> str:
    return format(float(v), ".9g")


def _parse_class(tag: str) -> SloccClass:
    try:
        return SloccClass.parse(tag)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _solved(tag: str, allow_gabcd: bool = False) -> SloccClass:
    cls = _parse_class(tag)
    if cls in SOLVED or (allow_gabcd and cls is SloccClass.GABCD):
        return cls
    raise UsageError(UNSUPPORTED_MSG.format(cls=cls.value))


def _threads(args) -> int:
    return args.threads or os.cpu_count() or 1


# --- subcommands -------------------------------------------------------------------

def cmd_state(args) -> int:
    try:
        a1, a2, a3 = (float(t) for t in args.alphas.split(","))
    except ValueError as exc:
        raise UsageError(f"--alphas expects three comma-separated numbers: {exc}") from exc
    s = make_state(a1, a2, a3, args.beta)
    p = to_point(s)
    ok, bad = is_physical(s)
    rho = to_density(s)
    digest = hashlib.sha256(np.round(rho, 12).tobytes()).hexdigest()[:16]
    out = {"state": s.to_json(), "point": {"x": p.x, "y": p.y, "z": p.z},
           "physical": ok, "violations": bad,
           "density": {"trace": float(np.real(np.trace(rho))),
                       "purity": float(np.real(np.trace(rho @ rho))), "sha256_16": digest}}
    if args.json:
        print(to_json17(out))
    else:
        print(f"point      x={_g9(p.x)}  y={_g9(p.y)}  z={_g9(p.z)}")
        print(f"physical   {ok}" + (f"  violated: {'; '.join(bad)}" if bad else ""))
        print(f"density    trace={_g9(out['density']['trace'])}  "
              f"purity={_g9(out['density']['purity'])}  sha256[:16]={digest}")
    return EXIT_OK


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def cmd_twirl(args) -> int:
    data = _read_json(args.infile)
    if isinstance(data, dict):
        data = data.get("psi", data.get("state"))
    try:
        psi = pure_state_from_json(data)
        if args.normalize:
            psi = psi / np.linalg.norm(psi)
        s = twirl(psi)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"malformed pure state: {exc}") from exc
    p = to_point(s)
    print(to_json17({"state": s.to_json(), "point": {"x": p.x, "y": p.y, "z": p.z}}))
    return EXIT_OK


def cmd_boundary(args) -> int:
    cls = _solved(args.cls, allow_gabcd=True)
    grid = sample_surface(cls, args.grid, threads=_threads(args))
    text = grid.to_csv()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(grid.samples)} samples ({int(grid.empty.sum())} empty) to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    cls = _parse_class(args.cls)
    if cls not in SOLVED and not args.exploratory:
        raise UsageError(UNSUPPORTED_MSG.format(cls=cls.value) + " (use --exploratory for an estimate)")
    cfg = OptimConfig(restarts=args.restarts, seed=args.seed, max_iters=args.max_iters,
                      la4_form=args.la4_form, complex_entries=not args.real,
                      threads=args.threads or 1)
    r = maximize_x(cls, args.y, args.z, cfg, exploratory=args.exploratory)
    out = r.to_json()
    if cls in SOLVED:
        a = B.effective_xmax(cls, args.y, args.z)
        out["analytic"] = {"x_max": a.x_max, "x_effective": a.x_effective, "empty": a.empty}
        if r.success and not a.empty:
            out["analytic"]["oracle_minus_analytic"] = r.x_best - a.x_effective
    print(to_json17(out))
    return EXIT_SOLVER if r.status == "not_converged" else EXIT_OK


def cmd_hull(args) -> int:
    cls = _solved(args.cls, allow_gabcd=True)
    sample_surface(cls, args.grid, threads=_threads(args))
    h = class_hull(cls, args.grid, refine=not args.no_refine)
    out = Path(args.out)
    out.write_text(h.to_obj(), encoding="utf-8")
    jpath = Path(args.json) if args.json else out.with_suffix(".json")
    jpath.write_text(to_json17(h.to_json()), encoding="utf-8")
    print(f"hull: {len(h.vertices)} vertices, {len(h.faces)} faces, volume {_g9(h.volume)}"
          f"{' (planar)' if h.planar else ''}; wrote {out} and {jpath}")
    return EXIT_OK


def cmd_hierarchy(args) -> int:
    inner = _solved(args.inner, allow_gabcd=True)
    outer = _solved(args.outer, allow_gabcd=True)
    for c in (inner, outer):
        sample_surface(c, args.grid, threads=_threads(args))
    rep = check_hierarchy(inner, outer, args.grid, args.tol)
    print(to_json17(rep.to_json()))
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_verify(args) -> int:
    from .acceptance import run_all
    only = None
    if args.only:
        try:
            only = {int(t) for t in args.only.split(",")}
        except ValueError as exc:
            raise UsageError(f"--only expects comma-separated criterion numbers: {exc}") from exc
    res = run_all(only)
    n_ok = sum(c.passed for c in res)
    print(f"{n_ok}/{len(res)} criteria passed")
    return EXIT_OK if n_ok == len(res) else EXIT_FAIL


# --- parser ----------------------------------------------------------------------------

def _grid(value: str) -> int:
    n = int(value)
    if n < 2:
        raise argparse.ArgumentTypeError("grid must be >= 2")
    return n


def _positive(value: str) -> float:
    v = float(value)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("expected a positive number")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ghz4", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for grid sweeps (default: available CPUs)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("state", help="coordinates, physicality and checksum of a symmetric state")
    s.add_argument("--alphas", required=True, help="a1,a2,a3")
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_state)

    s = sub.add_parser("twirl", help="twirl a pure state read from JSON")
    s.add_argument("--in", dest="infile", required=True,
                   help="JSON list of 16 [re, im] pairs, or {\"psi\": [...]}")
    s.add_argument("--normalize", action="store_true")
    s.set_defaults(func=cmd_twirl)

    s = sub.add_parser("boundary", help="sample x_max over the (y, z) triangle")
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--grid", type=_grid, default=32)
    s.add_argument("--out")
    s.set_defaults(func=cmd_boundary)

    s = sub.add_parser("oracle", help="numerical maximization of x at fixed (y, z)")
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--y", type=float, required=True)
    s.add_argument("--z", type=float, required=True)
    s.add_argument("--restarts", type=int, default=16)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iters", type=int, default=400)
    s.add_argument("--la4-form", choices=["reduced", "variant"], default="reduced")
    s.add_argument("--real", action="store_true", help="restrict matrix entries to reals")
    s.add_argument("--exploratory", action="store_true",
                   help="allow the unsolved classes; results are estimates only")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("hull", help="mirrored convex hull of a class region")
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--grid", type=_grid, default=64)
    s.add_argument("--out", required=True)
    s.add_argument("--json")
    s.add_argument("--no-refine", action="store_true")
    s.set_defaults(func=cmd_hull)

    s = sub.add_parser("hierarchy", help="pointwise inclusion test between two classes")
    s.add_argument("--inner", required=True)
    s.add_argument("--outer", required=True)
    s.add_argument("--grid", type=_grid, default=40)
    s.add_argument("--tol", type=_positive, default=None)
    s.set_defaults(func=cmd_hierarchy)

    s = sub.add_parser("verify", help="run the acceptance suite")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, UnsupportedClassError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
