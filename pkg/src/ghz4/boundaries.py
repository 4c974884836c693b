"""Closed-form and numerical x_max(y, z) boundaries for the five solved classes.

For a class anchor and fixed (y, z), x_max is the stationary value of the
coherence over the anchor's local-operation orbit. The region of the class
at (y, z) is |x| <= min(x_max, alpha1); a negative or undefined x_max marks
an empty slice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .slocc import SloccClass, UnsupportedClassError
from .symstate import alphas_from_yz

CLOSED_FORM_TOL = 1e-10
SYSTEM_TOL = 1e-8
EDGE_TOL = 1e-12


@dataclass
class BoundaryResult:
    x_max: float
    x_effective: float
    empty: bool = False
    branch_info: dict = field(default_factory=dict)

    @property
    def reach(self) -> float:
        """Largest |x| in the slice; -inf when the slice is empty."""
        return -math.inf if self.empty else self.x_effective


@dataclass(frozen=True)
class Labc2Root:
    u: float
    v: float
    absq: float

    def constraint_residuals(self, alpha1: float, alpha2: float) -> np.ndarray:
        k, u, v = self.absq, self.u, self.v
        return np.array([k * (1 + v + u) ** 2 - 1,
                         k * (1 + u * u) - 2 * alpha1,
                         k * v * (1 + u) - 4 * alpha2])


@dataclass(frozen=True)
class La2031Solution:
    f: float
    nu: float
    mu1: float
    mu2: float

    @property
    def x(self) -> float:
        return 9 * self.f * self.nu * self.mu1 * self.mu2 ** 2


def _empty(x_max=math.nan, **info) -> BoundaryResult:
    return BoundaryResult(x_max, math.nan, True, info)


# --- polynomial roots -------------------------------------------------------

def _polyval_abs(c, r):
    return np.polyval(np.abs(c), abs(r))


def solve_quartic_real(c4, c3, c2, c1, c0, tol: float = CLOSED_FORM_TOL) -> list[float]:
    """Real roots of c4 u^4 + ... + c0, sorted, with multiplicity.

    Leading zero coefficients reduce the degree. Each root gets one Newton
    polish; the residual is measured relative to sum |c_k| |u|^k, which is the
    absolute residual for roots and coefficients of order one.
    """
    c = np.array([c4, c3, c2, c1, c0], dtype=float)
    if not np.all(np.isfinite(c)):
        raise ValueError("non-finite polynomial coefficients")
    scale = np.abs(c).max()
    if scale == 0:
        raise ValueError("degenerate polynomial: all coefficients are zero")
    c = c / scale
    nz = np.flatnonzero(np.abs(c) > 1e-15)
    c = c[nz[0]:]
    if c.size == 1:
        return []
    dc = np.polyder(c)
    out = []
    for r in np.roots(c):
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        u = float(r.real)
        p, dp = np.polyval(c, u), np.polyval(dc, u)
        if dp != 0:
            un = u - p / dp
            if abs(np.polyval(c, un)) <= abs(p):
                u = un
        if abs(np.polyval(c, u)) <= tol * max(1.0, _polyval_abs(c, u)):
            out.append(u)
    return sorted(out)


# --- L_abc2 -----------------------------------------------------------------

def labc2_quartic(alpha1: float, alpha2: float) -> tuple[float, ...]:
    """Coefficients (u^4 .. u^0) of 2[a1(1+u)^2 + 2a2(1+u^2)]^2 - a1(1+u^2)(1+u)^2."""
    p = alpha1 + 2 * alpha2
    e = 2 * p * p - alpha1
    o = 8 * p * alpha1 - 2 * alpha1
    m = 4 * p * p + 8 * alpha1 * alpha1 - 2 * alpha1
    return e, o, m, o, e


def xmax_labc2(alpha1: float, alpha2: float) -> BoundaryResult:
    if alpha1 <= EDGE_TOL:
        # the quartic collapses to 8 alpha2^2 (1 + u^2)^2: no real root unless alpha2 = 0 too
        if alpha2 <= EDGE_TOL:
            return BoundaryResult(0.0, 0.0, False, {"roots": [], "reason": "quartic vanishes identically"})
        return _empty(roots=[], reason="alpha1 = 0 leaves no real root")
    coeffs = labc2_quartic(alpha1, alpha2)
    roots = solve_quartic_real(*coeffs)
    cands = []
    for u in roots:
        if u < -EDGE_TOL:
            continue
        u = max(u, 0.0)
        absq = 2 * alpha1 / (1 + u * u)
        v = 2 * alpha2 * (1 + u * u) / (alpha1 * (1 + u))
        if v < -EDGE_TOL:
            continue
        cands.append((2 * alpha1 * u / (1 + u * u), Labc2Root(u, v, absq)))
    info = {"roots": roots, "coefficients": coeffs}
    if not cands:
        return _empty(**info, reason="no nonnegative root")
    x, best = max(cands, key=lambda t: t[0])
    info.update(root=best, residual=float(np.polyval(coeffs, best.u)),
                realizable=best.v ** 2 >= 4 * best.u - 1e-12)
    return BoundaryResult(x, min(x, alpha1), False, info)


# --- L_a2b2 -----------------------------------------------------------------

def xmax_la2b2(alpha3: float, alpha1: float | None = None) -> BoundaryResult:
    x = 3 * alpha3
    eff = x if alpha1 is None else min(x, alpha1)
    return BoundaryResult(x, eff, False, {})


# --- L_{0_{3+1}0_{3+1}} -----------------------------------------------------

def l031031_radicand(alpha1: float, alpha2: float, alpha3: float) -> float:
    s = math.sqrt(max(1 - 16 * alpha2, 0.0))
    return (2 * alpha1 * (1 - 8 * alpha2) - (1 - 16 * alpha2 + 32 * alpha2 ** 2)
            + 6 * alpha3 * s) / 2


def xmax_l031031(alpha1: float, alpha2: float, alpha3: float) -> BoundaryResult:
    if 1 - 16 * alpha2 < -EDGE_TOL:
        return _empty(reason="1 - 16 alpha2 < 0")
    rad = l031031_radicand(alpha1, alpha2, alpha3)
    if rad < -EDGE_TOL:
        return _empty(reason="negative radicand", radicand=rad)
    x = math.sqrt(max(rad, 0.0))
    return BoundaryResult(x, min(x, alpha1), False, {"radicand": rad})


# --- L_a4 -------------------------------------------------------------------

def la4_quadratic_residual(x: float, alpha1: float, alpha2: float, alpha3: float) -> float:
    return x * x + (alpha1 - 3 * alpha3) * x + (4 * alpha2 ** 2 - 3 * alpha1 * alpha3)


def xmax_la4(alpha1: float, alpha2: float, alpha3: float) -> BoundaryResult:
    arg = (alpha1 + 3 * alpha3 - 4 * alpha2) / 2
    if arg < -EDGE_TOL:
        return _empty(reason="negative square-root argument", argument=arg)
    x = 0.5 * ((3 * alpha3 - alpha1) + math.sqrt(max(arg, 0.0)))
    info = {"residual": la4_quadratic_residual(x, alpha1, alpha2, alpha3)}
    if x < -EDGE_TOL:
        return _empty(x, reason="negative stationary value", **info)
    x = max(x, 0.0)
    return BoundaryResult(x, min(x, alpha1), False, info)


# --- L_{a2 0_{3+1}} ---------------------------------------------------------

def secular_coefficients(mu1, mu2):
    """(a, b, c) of a nu^4 + b nu^2 + c = 0."""
    a = (mu1 + 2 * mu2) * (3 - 2 * mu1 * mu2 ** 3 - mu2 ** 4)
    b = -(mu1 ** 2 + mu1 * mu2 + mu2 ** 2) * (mu1 + 5 * mu2 - 5 * mu1 * mu2 ** 4 - mu2 ** 5)
    c = mu1 * mu2 ** 2 * (2 * mu1 + mu2) * (mu1 + 2 * mu2 - 3 * mu1 * mu2 ** 4)
    return a, b, c


def _la2031_forward(nu, mu1, mu2):
    """Normalized (f, alpha1, alpha2, x) on a point of the ratio manifold."""
    q = (mu1 + 2 * mu2) ** 2
    r = mu2 ** 2 * (2 * mu1 + mu2) ** 2
    s = 3 * mu1 ** 2 * mu2 ** 4
    n2 = nu ** 2
    f = 1 / (3 * (1 + n2) * (3 + s + q + r))
    a1 = 4.5 * f * (1 + n2 * mu1 ** 2 * mu2 ** 4)
    a2 = 3 * f * (s + 3 * n2 + q + n2 * r) / 8
    return f, a1, a2, 9 * f * nu * mu1 * mu2 ** 2


def _la2031_residual(v, alpha1, alpha2):
    """Normalization, alpha2 and secular residuals with f fixed by the alpha1 equation."""
    nu, mu1, mu2 = v[..., 0], v[..., 1], v[..., 2]
    n2 = nu ** 2
    f = 2 * alpha1 / (9 * (1 + n2 * mu1 ** 2 * mu2 ** 4))
    q = (mu1 + 2 * mu2) ** 2
    r = mu2 ** 2 * (2 * mu1 + mu2) ** 2
    s = 3 * mu1 ** 2 * mu2 ** 4
    a, b, c = secular_coefficients(mu1, mu2)
    return np.stack([3 * f * (1 + n2) * (3 + s + q + r) - 1,
                     3 * f * (s + 3 * n2 + q + n2 * r) - 8 * alpha2,
                     a * n2 ** 2 + b * n2 + c], axis=-1), f


def _secular_nu(mu1, mu2):
    """All nu >= 0 solving the secular equation at each (mu1, mu2); returns (nu, mu1, mu2, branch)."""
    a, b, c = secular_coefficients(mu1, mu2)
    out = []
    with np.errstate(all="ignore"):
        disc = b * b - 4 * a * c
        sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
        for k, sign in enumerate((1.0, -1.0)):
            t = np.where(np.abs(a) > 1e-14, (-b + sign * sq) / (2 * a), -c / b)
            ok = np.isfinite(t) & (t > 0)
            out.append((np.sqrt(t[ok]), mu1[ok], mu2[ok], np.full(ok.sum(), k)))
    return tuple(np.concatenate(parts) for parts in zip(*out))


def seed_grid(n: int = 32, span: float = 4.0):
    """(mu1, mu2) starts: mu2 in (0, span], mu1 in [-span, span] without 0."""
    g = np.linspace(span / n, span, n)
    m1, m2 = np.meshgrid(np.concatenate([-g[::-1], g]), g, indexing="ij")
    return m1.ravel(), m2.ravel()


@lru_cache(maxsize=1)
def _seed_table():
    """Forward map of a dense ratio sample onto (alpha1, alpha2), split by branch."""
    g = np.geomspace(1e-2, 1e2, 161)
    m1, m2 = np.meshgrid(np.concatenate([-g[::-1], g]), g, indexing="ij")
    nu, mu1, mu2, br = _secular_nu(m1.ravel(), m2.ravel())
    f, a1, a2, _ = _la2031_forward(nu, mu1, mu2)
    keep = np.isfinite(a1) & np.isfinite(a2) & (f > 0)
    v = np.stack([nu, mu1, mu2], axis=1)[keep]
    key = (br[keep] * 2 + (mu1[keep] > 0)).astype(int)
    pts = np.stack([a1[keep], a2[keep]], axis=1)
    groups = []
    for k in range(4):
        sel = key == k
        if sel.any():
            groups.append((cKDTree(pts[sel]), v[sel]))
    return groups


def _newton(v, alpha1, alpha2, iters=60, tol=1e-13):
    """Batched damped Newton with complex-step Jacobians."""
    v = np.array(v, dtype=float)
    h = 1e-30
    eye = np.eye(3)
    active = np.ones(len(v), dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(iters):
            idx = np.flatnonzero(active)
            if idx.size == 0:
                break
            va = v[idx]
            r, _ = _la2031_residual(va, alpha1, alpha2)
            rn = np.abs(r).max(axis=1)
            done = (rn < tol) | ~np.isfinite(rn) | (np.abs(va).max(axis=1) > 1e6)
            J = np.swapaxes(_la2031_residual(va[:, None, :] + 1j * h * eye, alpha1, alpha2)[0].imag / h, 1, 2)
            ok = np.isfinite(J).all(axis=(1, 2)) & (np.abs(np.linalg.det(J)) > 1e-300)
            step = np.zeros_like(va)
            good = ok & ~done
            if good.any():
                step[good] = np.linalg.solve(J[good], -r[good][..., None])[..., 0]
            lam = np.ones(len(va))
            new = va + step
            for _ in range(6):
                rr, _ = _la2031_residual(new, alpha1, alpha2)
                nn = np.abs(rr).max(axis=1)
                worse = good & ~(nn < rn)
                if not worse.any():
                    break
                lam[worse] /= 2
                new[worse] = va[worse] + lam[worse, None] * step[worse]
            stuck = good & (lam < 0.05)
            v[idx] = np.where(good[:, None], new, va)
            active[idx[done | ~ok | stuck]] = False
    r, f = _la2031_residual(v, alpha1, alpha2)
    return v, np.abs(r).max(axis=1), f


def _system_residuals(sol: La2031Solution, alpha1: float, alpha2: float) -> np.ndarray:
    f, nu, m1, m2 = sol.f, sol.nu, sol.mu1, sol.mu2
    a, b, c = secular_coefficients(m1, m2)
    q, r, s = (m1 + 2 * m2) ** 2, m2 ** 2 * (2 * m1 + m2) ** 2, 3 * m1 ** 2 * m2 ** 4
    return np.array([3 * f * (1 + nu ** 2) * (3 + s + q + r) - 1,
                     9 * f * (1 + nu ** 2 * m1 ** 2 * m2 ** 4) - 2 * alpha1,
                     3 * f * (s + 3 * nu ** 2 + q + nu ** 2 * r) - 8 * alpha2,
                     a * nu ** 4 + b * nu ** 2 + c])


def xmax_la2031(alpha1: float, alpha2: float, exhaustive: bool = False,
                n_grid: int = 32, k_seeds: int = 12) -> BoundaryResult:
    """Largest stationary |x| of the four-equation ratio system.

    Starts come either from the exhaustive (mu1, mu2) grid with every real
    nu^2 >= 0 root of the secular quadratic, or (default) from the nearest
    entries of a precomputed forward table of the secular manifold.
    """
    if alpha1 <= EDGE_TOL:
        return _empty(reason="alpha1 = 0 forces f = 0 against the normalization")
    if alpha2 <= EDGE_TOL:
        # nu = mu1 = mu2 = 0, so 9f = 1 = 2 alpha1: only the GHZ corner survives
        if abs(alpha1 - 0.5) <= EDGE_TOL:
            return BoundaryResult(0.0, 0.0, False, {"reason": "GHZ corner"})
        return _empty(reason="alpha2 = 0 forces nu = mu = 0")
    if exhaustive:
        m1, m2 = seed_grid(n_grid)
        nu, mu1, mu2, _ = _secular_nu(m1, m2)
        starts = np.stack([nu, mu1, mu2], axis=1)
    else:
        parts = []
        for tree, vals in _seed_table():
            k = min(k_seeds, len(vals))
            _, ii = tree.query([alpha1, alpha2], k=k)
            parts.append(vals[np.atleast_1d(ii)])
        starts = np.concatenate(parts)
    v, res, f = _newton(starts, alpha1, alpha2)
    ok = (res < SYSTEM_TOL * 1e-2) & (f > 0) & np.isfinite(res)
    info = {"starts": len(starts), "converged": int(ok.sum())}
    if not ok.any():
        return _empty(reason="no converged branch", **info)
    xs = 9 * f * v[:, 0] * v[:, 1] * v[:, 2] ** 2
    x = np.where(ok, np.abs(xs), -np.inf)
    i = int(np.argmax(x))
    # nu -> -nu leaves every constraint unchanged and flips the sign of x
    sol = La2031Solution(float(f[i]), float(v[i, 0] * np.sign(xs[i])), float(v[i, 1]), float(v[i, 2]))
    info.update(solution=sol, residuals=_system_residuals(sol, alpha1, alpha2),
                branch_values=sorted(set(np.round(x[ok], 10).tolist())))
    return BoundaryResult(float(x[i]), min(float(x[i]), alpha1), False, info)


# --- dispatch ----------------------------------------------------------------

def effective_xmax(cls: "SloccClass | str", y: float, z: float) -> BoundaryResult:
    cls = SloccClass.parse(cls)
    a1, a2, a3 = alphas_from_yz(y, z)
    if cls is SloccClass.GABCD:
        return BoundaryResult(a1, a1, False, {})
    if cls is SloccClass.LABC2:
        r = xmax_labc2(a1, a2)
    elif cls is SloccClass.LA2B2:
        r = xmax_la2b2(a3)
    elif cls is SloccClass.LA2O31:
        r = xmax_la2031(a1, a2)
    elif cls is SloccClass.L031031:
        r = xmax_l031031(a1, a2, a3)
    elif cls is SloccClass.LA4:
        r = xmax_la4(a1, a2, a3)
    else:
        raise UnsupportedClassError(
            f"class {cls.value} has no analytic boundary (lab3, l053 and l071 are open)")
    if not r.empty:
        r.x_effective = min(r.x_max, a1)
    return r
