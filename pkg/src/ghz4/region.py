"""Region geometry over the (y, z) projection triangle.

Sampling uses a barycentric lattice on the triangle spanned by the (y, z)
images of the GHZ pair, P3 and P4. Every sample stores x >= 0; the mirror
x -> -x is applied when point clouds are built for hulls.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .boundaries import BoundaryResult, effective_xmax
from .slocc import SloccClass, UnsupportedClassError
from .symstate import ParamPoint, alphas_from_yz, vertices

CSV_HEADER = ("y", "z", "x_max", "x_effective", "empty")
HULL_TOL = 1e-9
HIERARCHY_TOL = 1e-9
NUMERIC_HIERARCHY_TOL = 1e-4


def triangle_corners() -> np.ndarray:
    """(y, z) of the GHZ corner, P3 and P4, in that order."""
    v = vertices()
    return np.array([[v[k][0].y, v[k][0].z] for k in ("P1", "P3", "P4")])


def _lattice(n: int) -> list[tuple[int, int, int]]:
    if n < 2:
        raise ValueError("grid parameter n must be >= 2")
    m = n - 1
    return [(i, j, m - i - j) for i in range(m, -1, -1) for j in range(m - i, -1, -1)]


def yz_grid(n: int) -> np.ndarray:
    """n(n+1)/2 lattice points with n-1 divisions per edge, corners included."""
    lat = np.array(_lattice(n), dtype=float) / (n - 1)
    return lat @ triangle_corners()


# --- surface sampling ------------------------------------------------------------

@dataclass
class SurfaceGrid:
    cls: str
    resolution: int
    samples: np.ndarray  # columns y, z, x_max, x_effective, empty
    diagnostics: dict = field(default_factory=dict)

    @property
    def y(self):
        return self.samples[:, 0]

    @property
    def z(self):
        return self.samples[:, 1]

    @property
    def x_max(self):
        return self.samples[:, 2]

    @property
    def x_effective(self):
        return self.samples[:, 3]

    @property
    def empty(self):
        return self.samples[:, 4].astype(bool)

    def reach(self) -> np.ndarray:
        """x_effective with -inf on empty slices."""
        return np.where(self.empty, -np.inf, self.x_effective)

    def cloud(self) -> np.ndarray:
        """(x, y, z) rows with both mirror signs for each non-empty sample."""
        ok = ~self.empty
        xs = self.x_effective[ok]
        pts = np.stack([xs, self.y[ok], self.z[ok]], axis=1)
        neg = pts * np.array([-1.0, 1.0, 1.0])
        return np.vstack([pts, neg])

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for y, z, xm, xe, e in self.samples:
            w.writerow([repr(float(y)), repr(float(z)), repr(float(xm)), repr(float(xe)), int(e)])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    @classmethod
    def from_csv(cls, text: str, cls_tag: str = "", resolution: int = 0) -> "SurfaceGrid":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != CSV_HEADER:
            raise ValueError(f"CSV header must be {','.join(CSV_HEADER)}")
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float).reshape(-1, 5)
        return cls(cls_tag, resolution, data)


def _point_result(cls: SloccClass, y: float, z: float) -> BoundaryResult:
    try:
        return effective_xmax(cls, y, z)
    except UnsupportedClassError:
        raise
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return BoundaryResult(float("nan"), float("nan"), True, {"error": repr(exc)})


def _row(y, z, r: BoundaryResult):
    return (y, z, r.x_max, r.x_effective, 1.0 if r.empty else 0.0)


def sample_surface(cls: "SloccClass | str", n: int, threads: int = 1) -> SurfaceGrid:
    """effective_xmax on yz_grid(n); results are cached per (class, n)."""
    cls = SloccClass.parse(cls)
    if cls not in (SloccClass.GABCD, SloccClass.LABC2, SloccClass.LA2B2,
                   SloccClass.LA2O31, SloccClass.L031031, SloccClass.LA4):
        raise UnsupportedClassError(f"no analytic surface for class {cls.value}")
    return _sample_cached(cls, n, threads)


@lru_cache(maxsize=64)
def _sample_cached(cls: SloccClass, n: int, threads: int) -> SurfaceGrid:
    pts = yz_grid(n)

    def one(p):
        return _point_result(cls, float(p[0]), float(p[1]))

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            res = list(ex.map(one, pts))
    else:
        res = [one(p) for p in pts]
    samples = np.array([_row(p[0], p[1], r) for p, r in zip(pts, res)], dtype=float)
    diag = {i: r.branch_info.get("reason") or r.branch_info.get("error")
            for i, r in enumerate(res) if r.empty}
    samples.setflags(write=False)
    return SurfaceGrid(cls.value, n, samples, diag)


def _state(cls, y, z):
    r = _point_result(cls, y, z)
    if r.empty:
        return (True, False), r
    a1 = alphas_from_yz(y, z)[0]
    return (False, r.x_max >= a1), r


def _bisect_edge(cls, p, q, sp, iters):
    lo, hi = 0.0, 1.0
    r_lo = r_hi = None
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        pt = p + mid * (q - p)
        s, r = _state(cls, *pt)
        if s == sp:
            lo, r_lo = mid, r
        else:
            hi, r_hi = mid, r
    out = []
    for t, r in ((lo, r_lo), (hi, r_hi)):
        if r is not None and not r.empty:
            y, z = p + t * (q - p)
            out.append((r.x_effective, y, z))
    return out


def refinement_points(cls: "SloccClass | str", n: int, iters: int | None = None) -> np.ndarray:
    """Boundary points where a lattice edge crosses the clamp wall or an empty patch.

    Bisection along every lattice edge whose endpoints differ in emptiness or in
    whether x_max reaches alpha1. Returns (x, y, z) rows with x >= 0.
    """
    cls = SloccClass.parse(cls)
    grid = sample_surface(cls, n)
    if iters is None:
        iters = 10 if cls is SloccClass.LA2O31 else 40
    lat = _lattice(n)
    index = {ijk: k for k, ijk in enumerate(lat)}
    a1 = np.array([alphas_from_yz(y, z)[0] for y, z in zip(grid.y, grid.z)])
    states = [(bool(e), (not e) and xm >= a) for e, xm, a in zip(grid.empty, grid.x_max, a1)]
    pts = yz_grid(n)
    out = []
    for k, (i, j, l) in enumerate(lat):
        for nb in ((i - 1, j + 1, l), (i - 1, j, l + 1), (i, j - 1, l + 1)):
            m = index.get(nb)
            if m is None or states[k] == states[m]:
                continue
            out.extend(_bisect_edge(cls, pts[k], pts[m], states[k], iters))
    return np.array(out, dtype=float).reshape(-1, 3)


def region_cloud(cls: "SloccClass | str", n: int = 64, refine: bool = True) -> np.ndarray:
    """Mirrored (x, y, z) cloud of a class region, ready for hulling."""
    grid = sample_surface(cls, n)
    parts = [grid.cloud()]
    if refine:
        extra = refinement_points(cls, n)
        parts += [extra, extra * np.array([-1.0, 1.0, 1.0])]
    return np.vstack(parts)


# --- hulls ---------------------------------------------------------------------------

@dataclass
class Hull:
    vertices: np.ndarray  # (V, 3) rows (x, y, z)
    faces: np.ndarray  # (F, 3) outward-oriented triangles
    equations: np.ndarray  # (K, 4): n . p + d <= 0 inside
    planar: bool = False
    volume: float = 0.0

    def vertex_points(self) -> list[ParamPoint]:
        return [ParamPoint(*map(float, v)) for v in self.vertices]

    def nearest_vertex_distance(self, p) -> float:
        p = _as_xyz(p)
        return float(np.min(np.linalg.norm(self.vertices - p, axis=1)))

    def to_obj(self) -> str:
        lines = [f"v {v[0]!r} {v[1]!r} {v[2]!r}" for v in self.vertices.tolist()]
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in self.faces.tolist()]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"vertices": self.vertices.tolist(), "faces": self.faces.tolist(),
                "planar": self.planar, "volume": self.volume}

    @classmethod
    def from_json(cls, d: dict) -> "Hull":
        return convex_hull(np.asarray(d["vertices"], dtype=float))


def read_obj(text: str) -> tuple[np.ndarray, np.ndarray]:
    vs, fs = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            vs.append([float(t) for t in parts[1:4]])
        elif parts[0] == "f":
            fs.append([int(t.split("/")[0]) - 1 for t in parts[1:4]])
    return np.array(vs, dtype=float).reshape(-1, 3), np.array(fs, dtype=int).reshape(-1, 3)


def _as_xyz(p) -> np.ndarray:
    if isinstance(p, ParamPoint):
        return p.as_array()
    return np.asarray(p, dtype=float).reshape(3)


def _points_array(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = points.astype(float).reshape(-1, 3)
    else:
        arr = np.array([_as_xyz(p) for p in points], dtype=float).reshape(-1, 3)
    if not np.all(np.isfinite(arr)):
        raise ValueError("hull input contains non-finite coordinates")
    return arr


def _planar_hull(pts: np.ndarray, center: np.ndarray, basis: np.ndarray) -> Hull:
    normal = basis[2]
    uv = (pts - center) @ basis[:2].T
    try:
        h2 = ConvexHull(uv)
    except QhullError as exc:
        raise ValueError("hull input is collinear or degenerate") from exc
    ring = h2.vertices  # counter-clockwise in (u, v)
    verts = pts[ring]
    k = len(ring)
    fan = [(0, i, i + 1) for i in range(1, k - 1)]
    if np.dot(np.cross(basis[0], basis[1]), normal) < 0:
        fan = [(a, c, b) for a, b, c in fan]
    faces = np.array(fan + [(a, c, b) for a, b, c in fan], dtype=int)
    eqs = [np.r_[normal, -normal @ center], np.r_[-normal, normal @ center]]
    for e in h2.equations:
        n3 = e[0] * basis[0] + e[1] * basis[1]
        eqs.append(np.r_[n3, e[2] - n3 @ center])
    return Hull(verts, faces, np.array(eqs), planar=True, volume=0.0)


def convex_hull(points) -> Hull:
    """Quickhull (Qhull) hull; coplanar input yields a two-sided planar hull."""
    pts = _points_array(points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points for a hull")
    center = pts.mean(axis=0)
    _, sv, vt = np.linalg.svd(pts - center, full_matrices=False)
    scale = max(sv[0], 1e-300)
    if len(sv) < 3 or sv[2] <= HULL_TOL * scale or len(pts) < 4:
        if len(sv) < 2 or sv[1] <= HULL_TOL * scale:
            raise ValueError("hull input is collinear or degenerate")
        return _planar_hull(pts, center, vt)
    try:
        qh = ConvexHull(pts)
    except QhullError:
        return _planar_hull(pts, center, vt)
    keep = np.array(sorted(qh.vertices))
    remap = -np.ones(len(pts), dtype=int)
    remap[keep] = np.arange(len(keep))
    faces = []
    for simplex, eq in zip(qh.simplices, qh.equations):
        a, b, c = simplex
        nrm = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        if nrm @ eq[:3] < 0:
            b, c = c, b
        faces.append((remap[a], remap[b], remap[c]))
    return Hull(pts[keep], np.array(faces, dtype=int), qh.equations.copy(),
                planar=False, volume=float(qh.volume))


def hull_contains(h: Hull, p, tol: float = HULL_TOL) -> bool:
    p = _as_xyz(p)
    return bool(np.all(h.equations[:, :3] @ p + h.equations[:, 3] <= tol))


def class_hull(cls: "SloccClass | str", n: int = 64, refine: bool = True) -> Hull:
    return convex_hull(region_cloud(cls, n, refine))


# --- hierarchy ----------------------------------------------------------------------

@dataclass
class InclusionReport:
    inner: str
    outer: str
    resolution: int
    tol: float
    max_violation: float
    violating_points: list
    compared: int
    skipped_empty_inner: int

    @property
    def holds(self) -> bool:
        return self.max_violation <= self.tol

    def to_json(self) -> dict:
        def num(v):
            return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")
        return {"inner": self.inner, "outer": self.outer, "resolution": self.resolution,
                "tol": self.tol, "max_violation": num(self.max_violation), "holds": self.holds,
                "compared": self.compared, "skipped_empty_inner": self.skipped_empty_inner,
                "violating_points": [{k: num(v) if isinstance(v, float) else v
                                      for k, v in d.items()} for d in self.violating_points]}


def default_tolerance(inner, outer) -> float:
    numeric = {SloccClass.LA2O31}
    if SloccClass.parse(inner) in numeric or SloccClass.parse(outer) in numeric:
        return NUMERIC_HIERARCHY_TOL
    return HIERARCHY_TOL


def check_hierarchy(inner: "SloccClass | str", outer: "SloccClass | str", n: int = 40,
                    tol: float | None = None, max_points: int = 50) -> InclusionReport:
    """Pointwise reach comparison, reach being x_effective (empty slice: -inf).

    Violation at a point is reach_inner - reach_outer; points where the inner
    slice is empty are skipped and count as satisfied.
    """
    inner, outer = SloccClass.parse(inner), SloccClass.parse(outer)
    tol = default_tolerance(inner, outer) if tol is None else float(tol)
    gi, go = sample_surface(inner, n), sample_surface(outer, n)
    ri, ro = gi.reach(), go.reach()
    live = np.isfinite(ri)
    with np.errstate(invalid="ignore"):
        viol = np.where(live, ri - ro, -np.inf)
    max_v = float(np.max(viol)) if live.any() else 0.0
    bad = np.flatnonzero(viol > tol)
    bad = bad[np.argsort(-viol[bad], kind="stable")][:max_points]
    pts = [{"y": float(gi.y[k]), "z": float(gi.z[k]), "inner": float(ri[k]),
            "outer": float(ro[k]), "violation": float(viol[k])} for k in bad]
    return InclusionReport(inner.value, outer.value, n, tol, max_v, pts,
                           int(live.sum()), int((~live).sum()))


__all__ = [
    "CSV_HEADER", "Hull", "InclusionReport", "SurfaceGrid", "check_hierarchy", "class_hull",
    "convex_hull", "default_tolerance", "hull_contains", "read_obj", "refinement_points",
    "region_cloud", "sample_surface", "triangle_corners", "yz_grid",
]


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), indent=2)
