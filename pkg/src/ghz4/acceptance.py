"""Acceptance suite shared by ``ghz4 verify`` and tests/test_acceptance.py.

Each check returns a Criterion with a pass flag and a short detail line.
Runtime limits are part of the criteria.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import boundaries as B
from .oracle import OptimConfig, maximize_x
from .region import check_hierarchy, class_hull, hull_contains, sample_surface, yz_grid, _lattice
from .slocc import SOLVED
from .symstate import (alphas_from_yz, from_point, hs_distance, landmarks, make_state,
                       mirror_unitary, to_density, to_point, twirl, vertex_states, vertices)

LA2O31_POLYGON = [
    (0.185703, 0.13171, 0.102878), (-0.185703, 0.13171, 0.102878),
    (0.0, -(1 / 8) * math.sqrt(2 / 7), -1 / math.sqrt(21)),
    (0.185703, 0.13171, -0.13717), (-0.185703, 0.13171, -0.13717),
    (0.0, math.sqrt(7 / 32), 0.0),
]


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f} s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        c = fn(*args, **kwargs)
        c.seconds = time.perf_counter() - t0
        return c
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def random_trace_states(rng: np.random.Generator, n: int):
    a1 = rng.uniform(-0.2, 0.7, n)
    a2 = rng.uniform(-0.1, 0.2, n)
    a3 = (0.5 - a1 - 4 * a2) / 3
    beta = rng.uniform(-0.7, 0.7, n)
    return [make_state(*v) for v in zip(a1, a2, a3, beta)]


def random_physical_points(rng: np.random.Generator, n: int, margin: float = 0.0):
    """Uniform points of the tetrahedron; margin keeps barycentric weights above it."""
    v = np.array([p.as_array() for p, _ in vertices().values()])
    w = rng.dirichlet(np.ones(4), size=n)
    w = margin + (1 - 4 * margin) * w
    return w @ v


def interior_yz(rng: np.random.Generator, n: int, margin: float = 0.05) -> np.ndarray:
    from .region import triangle_corners
    w = rng.dirichlet(np.ones(3), size=n)
    w = margin + (1 - 3 * margin) * w
    return w @ triangle_corners()


def interior_grid(n: int) -> np.ndarray:
    pts = yz_grid(n)
    keep = [k for k, ijk in enumerate(_lattice(n)) if min(ijk) > 0]
    return pts[keep]


@_timed
def c1_isometry(seed: int = 1) -> Criterion:
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    a, b = random_trace_states(rng, 1000), random_trace_states(rng, 1000)
    err = 0.0
    for s, t in zip(a, b):
        pe, qe = to_point(s).as_array(), to_point(t).as_array()
        err = max(err, abs(hs_distance(s, t) - float(np.linalg.norm(pe - qe))))
    dt = time.perf_counter() - t0
    return Criterion(1, "isometry", err < 1e-12 and dt < 1.0,
                     f"max |d_HS - d_E| = {err:.2e} over 1000 pairs in {dt:.2f} s")


@_timed
def c2_vertices(seed: int = 0) -> Criterion:
    ref = vertices()
    err = 0.0
    for k, psi in vertex_states().items():
        p = to_point(twirl(psi)).as_array()
        err = max(err, float(np.abs(p - ref[k][0].as_array()).max()))
    return Criterion(2, "vertex twirls", err < 1e-12, f"max coordinate error {err:.2e}")


@_timed
def c3_mirror(seed: int = 3) -> Criterion:
    rng = np.random.default_rng(seed)
    u = mirror_unitary()
    err = 0.0
    from .symstate import ParamPoint
    for x, y, z in random_physical_points(rng, 100):
        s = from_point(ParamPoint(x, y, z))
        m = from_point(ParamPoint(-x, y, z))
        err = max(err, float(np.abs(u @ to_density(s) @ u.conj().T - to_density(m)).max()))
    return Criterion(3, "mirror symmetry", err < 1e-12, f"max |u rho u^dag - rho(-x)| = {err:.2e}")


@_timed
def c4_labc2(seed: int = 0) -> Criterion:
    lm = landmarks()
    z1 = B.effective_xmax("labc2", lm["z1"].y, lm["z1"].z).x_max
    g = B.effective_xmax("labc2", lm["z2"].y, lm["z2"].z).x_max
    ok = abs(z1 - 0.25) < 1e-10 and abs(g) < 1e-10
    return Criterion(4, "labc2 quartic", ok, f"x_max(z1) = {z1:.12g}, x_max(GHZ corner) = {g:.3g}")


@_timed
def c5_la2b2(seed: int = 5, restarts: int = 32) -> Criterion:
    grid = sample_surface("la2b2", 40)
    a3 = np.array([alphas_from_yz(y, z)[2] for y, z in zip(grid.y, grid.z)])
    analytic = float(np.abs(grid.x_max - 3 * a3).max())
    pts = [p for p in interior_grid(10) if 3 * alphas_from_yz(*p)[2] < alphas_from_yz(*p)[0]]
    idx = np.linspace(0, len(pts) - 1, 10).round().astype(int)
    cfg = OptimConfig(restarts=restarts, seed=seed)
    worst_gap, worst_over, rows = 0.0, -math.inf, []
    for k in idx:
        y, z = pts[k]
        bound = 3 * alphas_from_yz(y, z)[2]
        r = maximize_x("la2b2", y, z, cfg)
        xb = r.x_best if r.success else -math.inf
        worst_gap = max(worst_gap, abs(xb - bound))
        worst_over = max(worst_over, xb - bound)
        rows.append(f"{xb:.4f}/{bound:.4f}")
    ok = analytic < 1e-12 and worst_gap <= 1e-2 and worst_over <= 5e-3
    return Criterion(5, "la2b2 boundary vs oracle", ok,
                     f"|x_max - 3a3| = {analytic:.1e}; oracle/3a3 at 10 points: {' '.join(rows)}; "
                     f"max |gap| = {worst_gap:.3g}, max excess = {worst_over:.2e}")


@_timed
def c6_l031031(seed: int = 0) -> Criterion:
    lm = landmarks()
    r = B.effective_xmax("l031031", lm["r1"].y, lm["r1"].z).x_max
    g = B.effective_xmax("l031031", lm["z2"].y, lm["z2"].z).x_max
    h = class_hull("l031031", 64)
    dist = {k: h.nearest_vertex_distance(lm[k]) for k in ("z2", "P3", "r1", "r2")}
    ok = abs(r - 0.25) < 1e-10 and abs(g) < 1e-10 and max(dist.values()) < 1e-3
    d = ", ".join(f"{k} {v:.1e}" for k, v in dist.items())
    return Criterion(6, "l031031 boundary and hull", ok,
                     f"x_max(r1) = {r:.12g}, x_max(GHZ) = {g:.3g}; vertex distances {d}")


@_timed
def c7_la2o31(seed: int = 0) -> Criterion:
    pts = interior_grid(40)
    conv = 0
    for y, z in pts:
        a1, a2, _ = alphas_from_yz(y, z)
        r = B.xmax_la2031(a1, a2)
        if not r.empty and np.abs(r.branch_info["residuals"]).max() < B.SYSTEM_TOL:
            conv += 1
    frac = conv / len(pts)
    h = class_hull("la2o31", 64)
    inside = [hull_contains(h, p, 1e-3) for p in LA2O31_POLYGON]
    ok = frac >= 0.95 and all(inside)
    return Criterion(7, "la2o31 solver and hull", ok,
                     f"converged on {conv}/{len(pts)} interior points ({frac:.1%}); "
                     f"polygon vertices inside hull: {sum(inside)}/6 {inside}")


@_timed
def c8_la4(seed: int = 0) -> Criterion:
    res, used = 0.0, 0
    for y, z in yz_grid(14):
        a1, a2, a3 = alphas_from_yz(y, z)
        r = B.xmax_la4(a1, a2, a3)
        if math.isfinite(r.x_max):
            res = max(res, abs(B.la4_quadratic_residual(r.x_max, a1, a2, a3)))
            used += 1
    o = B.xmax_la4(1 / 16, 1 / 16, 1 / 16).x_max
    ok = res < 1e-10 and abs(o - 1 / 16) < 1e-12 and used > 0
    return Criterion(8, "la4 quadratic", ok,
                     f"max quadratic residual {res:.1e} on {used} points; x_max(origin) = {o!r}")


HIERARCHY_PASS = [("labc2", "la4"), ("la4", "la2b2"), ("la2b2", "gabcd"),
                  ("la2o31", "gabcd"), ("l031031", "gabcd")]
HIERARCHY_FAIL = [("la2o31", "la2b2"), ("l031031", "la2b2")]


@_timed
def c9_hierarchies(seed: int = 0) -> Criterion:
    t0 = time.perf_counter()
    parts, ok = [], True
    for a, b in HIERARCHY_PASS:
        r = check_hierarchy(a, b, 40, 1e-9)
        ok &= r.holds
        parts.append(f"{a}<={b} {r.max_violation:.1e}")
    for a, b in HIERARCHY_FAIL:
        r = check_hierarchy(a, b, 40, 1e-9)
        ok &= r.max_violation > 1e-9
        parts.append(f"{a}!<={b} {r.max_violation:.3g}")
    dt = time.perf_counter() - t0
    return Criterion(9, "hierarchies", ok and dt < 60, "; ".join(parts))


@_timed
def c10_soundness(seed: int = 10, restarts: int = 16) -> Criterion:
    rng = np.random.default_rng(seed)
    cfg = OptimConfig(restarts=restarts, seed=seed)
    worst, rows = -math.inf, []
    for cls in SOLVED:
        excess = -math.inf
        for y, z in interior_yz(rng, 5):
            bound = B.effective_xmax(cls, y, z).reach
            r = maximize_x(cls, y, z, cfg)
            if r.success:
                excess = max(excess, r.x_best - bound)
        worst = max(worst, excess)
        rows.append(f"{cls.value} {excess:.3g}")
    return Criterion(10, "oracle soundness", worst <= 5e-3,
                     "max(x_best - x_eff) per class: " + ", ".join(rows))


ALL = [c1_isometry, c2_vertices, c3_mirror, c4_labc2, c5_la2b2, c6_l031031,
       c7_la2o31, c8_la4, c9_hierarchies, c10_soundness]
LIMITS = {5: 120.0, 9: 60.0, 10: 300.0}


def run_all(only=None, echo=print) -> list[Criterion]:
    out = []
    for fn in ALL:
        num = int(fn.__name__[1:].split("_")[0])
        if only and num not in only:
            continue
        c = fn()
        lim = LIMITS.get(num)
        if lim is not None and c.seconds > lim:
            c.passed = False
            c.detail += f"; exceeded {lim:.0f} s limit"
        out.append(c)
        if echo:
            echo(c.line())
    return out
