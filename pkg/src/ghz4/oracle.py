"""Brute-force maximization of x over local-operation orbits.

At fixed (y, z) the oracle searches over four complex 2x2 matrices acting
on a class anchor, keeps the twirled alpha1 and alpha2 on target through a
quadratic penalty with growing weights, and returns the best feasible x.
It shares no algebra with the closed forms in ``boundaries``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .boundaries import La2031Solution
from .slocc import (SOLVED, ClassParams, LocalOp, SloccClass, UnsupportedClassError,
                    degenerate_representative, representative)
from .symstate import ODD, alphas_from_yz, normalize

FEASIBLE_TOL = 1e-6

_P0000, _P1111 = 0, 15


@dataclass(frozen=True)
class OptimConfig:
    restarts: int = 16
    max_iters: int = 400
    penalty_weight_schedule: tuple = (1e1, 1e2, 1e3, 1e4, 1e5, 1e6)
    step_tolerance: float = 1e-12
    seed: int = 0
    fd_step: float = 1e-6
    projection_steps: int = 2
    complex_entries: bool = True
    la4_form: str = "reduced"
    threads: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        w = np.asarray(self.penalty_weight_schedule, dtype=float)
        if w.size == 0 or np.any(w <= 0) or np.any(np.diff(w) <= 0):
            raise ValueError("penalty_weight_schedule must be positive and strictly increasing")
        if self.max_iters < 1 or self.step_tolerance <= 0 or self.fd_step <= 0:
            raise ValueError("max_iters, step_tolerance and fd_step must be positive")


@dataclass
class OracleResult:
    cls: str
    y: float
    z: float
    target: tuple
    x_best: float
    constraint_residual: float
    best_op: LocalOp | None
    starts_converged: int
    restarts: int
    status: str = "ok"  # ok | infeasible | not_converged
    label: str = "anchor orbit"
    residual_trend: list = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.status == "ok"

    def to_json(self) -> dict:
        return {
            "class": self.cls, "y": self.y, "z": self.z,
            "alpha_target": list(self.target),
            "x_best": None if not math.isfinite(self.x_best) else self.x_best,
            "constraint_residual": self.constraint_residual,
            "starts_converged": self.starts_converged, "restarts": self.restarts,
            "status": self.status, "label": self.label,
            "residual_trend": self.residual_trend,
            "best_op": None if self.best_op is None else self.best_op.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, default=_json_float)


def _json_float(v):
    return float(v)


# --- batched features ----------------------------------------------------------

def _mats(P: np.ndarray, complex_entries: bool) -> np.ndarray:
    if complex_entries:
        return (P[:, :16] + 1j * P[:, 16:]).reshape(-1, 4, 2, 2)
    return P.reshape(-1, 4, 2, 2).astype(complex)


def features(P, psi: np.ndarray, complex_entries: bool = True) -> np.ndarray:
    """(x, alpha1, alpha2) of the twirl of op(P) |psi> for each row of P."""
    P = np.atleast_2d(P)
    M = _mats(P, complex_entries)
    t = np.asarray(psi, dtype=complex).reshape(2, 2, 2, 2)
    t = np.einsum("zai,ijkl->zajkl", M[:, 0], t)
    t = np.einsum("zbj,zajkl->zabkl", M[:, 1], t)
    t = np.einsum("zck,zabkl->zabcl", M[:, 2], t)
    t = np.einsum("zdl,zabcl->zabcd", M[:, 3], t).reshape(-1, 16)
    p = np.abs(t) ** 2
    n = p.sum(axis=1)
    with np.errstate(all="ignore"):
        x = np.real(t[:, _P0000] * np.conj(t[:, _P1111])) / n
        a1 = (p[:, _P0000] + p[:, _P1111]) / (2 * n)
        a2 = p[:, ODD].sum(axis=1) / (8 * n)
    return np.stack([x, a1, a2], axis=1)


class _Problem:
    def __init__(self, psi, a1, a2, cfg: OptimConfig):
        self.psi = psi
        self.target = np.array([a1, a2])
        self.cfg = cfg
        self.dim = 32 if cfg.complex_entries else 16

    def feats(self, P):
        return features(P, self.psi, self.cfg.complex_entries)

    def _fd(self, p):
        """Features at p and central-difference Jacobian, in one batch."""
        h = self.cfg.fd_step * np.maximum(1.0, np.abs(p))
        E = np.diag(h)
        F = self.feats(np.vstack([p[None, :], p + E, p - E]))
        d = self.dim
        J = (F[1:d + 1] - F[d + 1:]) / (2 * h)[:, None]
        return F[0], J.T

    def penalized(self, p, w):
        F, J = self._fd(p)
        c = F[1:] - self.target
        val = -F[0] + w * (c @ c)
        grad = -J[0] + 2 * w * (c @ J[1:])
        if not (np.isfinite(val) and np.all(np.isfinite(grad))):
            return 1e10, np.zeros_like(p)
        return val, grad

    def project(self, p, steps):
        """Minimum-norm Newton steps onto alpha1 = a1, alpha2 = a2."""
        for _ in range(steps):
            F, J = self._fd(p)
            c = F[1:] - self.target
            Jc = J[1:]
            try:
                p = p - Jc.T @ np.linalg.solve(Jc @ Jc.T, c)
            except np.linalg.LinAlgError:
                break
        return p

    def residual(self, p):
        F = self.feats(p[None, :])[0]
        return float(np.max(np.abs(F[1:] - self.target))), float(F[0])


def _initial_point(rng: np.random.Generator, complex_entries: bool) -> np.ndarray:
    mats = rng.normal(size=(4, 2, 2)) + (1j * rng.normal(size=(4, 2, 2)) if complex_entries else 0)
    dets = np.abs(np.linalg.det(mats))
    mats = mats / np.sqrt(np.maximum(dets, 1e-12))[:, None, None]
    flat = mats.reshape(16)
    return np.concatenate([flat.real, flat.imag]) if complex_entries else flat.real.copy()


def _run_start(prob: _Problem, rng: np.random.Generator):
    cfg = prob.cfg
    p = _initial_point(rng, cfg.complex_entries)
    trend = []
    for w in cfg.penalty_weight_schedule:
        res = minimize(prob.penalized, p, args=(w,), jac=True, method="L-BFGS-B",
                       options={"maxiter": cfg.max_iters, "ftol": cfg.step_tolerance,
                                "gtol": 1e-10})
        if np.all(np.isfinite(res.x)):
            p = res.x
        trend.append(prob.residual(p)[0])
    p = prob.project(p, cfg.projection_steps)
    r, x = prob.residual(p)
    return x, r, p, trend


def anchor_state(cls: "SloccClass | str", cfg: OptimConfig | None = None,
                 exploratory: bool = False, params: ClassParams | None = None) -> tuple[np.ndarray, str]:
    cls = SloccClass.parse(cls)
    cfg = cfg or OptimConfig()
    if cls in SOLVED:
        return degenerate_representative(cls, la4_form=cfg.la4_form), "anchor orbit"
    if not exploratory:
        raise UnsupportedClassError(
            f"class {cls.value} has no analytic anchor; pass exploratory=True for an estimate")
    return normalize(representative(cls, params)), "estimate only"


def maximize_x(cls: "SloccClass | str", y: float, z: float, cfg: OptimConfig | None = None,
               exploratory: bool = False, params: ClassParams | None = None) -> OracleResult:
    """Best feasible x at (y, z) over the orbit of a class anchor."""
    cfg = cfg or OptimConfig()
    cls = SloccClass.parse(cls)
    a1, a2, a3 = alphas_from_yz(y, z)
    if min(a1, a2, a3) < -1e-12:
        raise ValueError(f"(y, z) = ({y}, {z}) lies outside the physical triangle")
    psi, label = anchor_state(cls, cfg, exploratory, params)
    prob = _Problem(psi, a1, a2, cfg)
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)]
    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as ex:
            runs = list(ex.map(lambda g: _run_start(prob, g), rngs))
    else:
        runs = [_run_start(prob, g) for g in rngs]

    ok = [r for r in runs if r[1] < FEASIBLE_TOL and math.isfinite(r[0])]
    common = dict(cls=cls.value, y=float(y), z=float(z), target=(a1, a2, a3),
                  restarts=cfg.restarts, label=label)
    if ok:
        x, r, p, trend = max(ok, key=lambda t: t[0])
        return OracleResult(x_best=x, constraint_residual=r, best_op=_to_op(p, cfg),
                            starts_converged=len(ok), residual_trend=trend, **common)
    x, r, p, trend = min(runs, key=lambda t: t[1])
    # residuals that stopped shrinking under heavier weights mean the target is out of reach
    stalled = len(trend) >= 2 and trend[-1] > 0.5 * trend[-2]
    return OracleResult(x_best=float("nan"), constraint_residual=r, best_op=_to_op(p, cfg),
                        starts_converged=0, residual_trend=trend,
                        status="infeasible" if stalled else "not_converged", **common)


def _to_op(p, cfg: OptimConfig) -> LocalOp:
    M = _mats(p[None, :], cfg.complex_entries)[0]
    return LocalOp(tuple(M[q] for q in range(4)))


def evaluate_op(cls: "SloccClass | str", op: LocalOp, la4_form: str = "reduced") -> tuple[float, float, float]:
    """(x, alpha1, alpha2) reached by a stored operation, for replaying a JSON dump."""
    psi = degenerate_representative(cls, la4_form=la4_form)
    p = np.concatenate([np.stack(op.mats).reshape(16).real, np.stack(op.mats).reshape(16).imag])
    return tuple(features(p[None, :], psi)[0])


# --- stationary systems ----------------------------------------------------------

def residuals_la2031(sol: La2031Solution, alpha1: float, alpha2: float) -> np.ndarray:
    """Left-minus-right of the normalization, alpha1, alpha2 and secular equations."""
    f, nu, m1, m2 = sol.f, sol.nu, sol.mu1, sol.mu2
    s = m1 + 2 * m2
    t = m2 * (2 * m1 + m2)
    u = m1 * m2 ** 2
    norm = 3 * f * (1 + nu ** 2) * (3 + 3 * u ** 2 + s ** 2 + t ** 2) - 1
    e1 = 9 * f * (1 + nu ** 2 * u ** 2) - 2 * alpha1
    e2 = 3 * f * (3 * u ** 2 + 3 * nu ** 2 + s ** 2 + nu ** 2 * t ** 2) - 8 * alpha2
    qa = s * (3 - 2 * m1 * m2 ** 3 - m2 ** 4)
    qb = -(m1 ** 2 + m1 * m2 + m2 ** 2) * (m1 + 5 * m2 - 5 * m1 * m2 ** 4 - m2 ** 5)
    qc = u * (2 * m1 + m2) * (s - 3 * m1 * m2 ** 4)
    return np.array([norm, e1, e2, qa * nu ** 4 + qb * nu ** 2 + qc])


def _la2b2_gradients(g, r1, r2):
    """z * d/dz of (x, Theta0, Theta1, Theta2) at the reduced point, per variable.

    Variables (mu1, mu2, A1, C1, B3, D3), fixed at mu1 = A1 = B3 = 1,
    mu2 = g, C1 = r1, D3 = r2 and mu3 = 0. The overall scale cancels.
    """
    x = 4 * r1 * r2 * g
    # each term of x is linear in every variable
    gx = np.full(6, x)
    s0 = 2 * (1 + r1 ** 2) * (1 + r2 ** 2)
    t0 = np.array([
        s0 * 4,                                       # mu1: 2 mu1^2 term, times 2
        s0 * 4 * g ** 2,                              # mu2
        4 * (1 + r2 ** 2) * (2 + 2 * g ** 2),         # A1
        4 * r1 ** 2 * (1 + r2 ** 2) * (2 + 2 * g ** 2),
        4 * (1 + r1 ** 2) * (2 + 2 * g ** 2),         # B3
        4 * r2 ** 2 * (1 + r1 ** 2) * (2 + 2 * g ** 2),
    ])
    p, q = 1.0, (r1 * r2 * g) ** 2                    # A1^2 B3^2 mu1^2 and C1^2 D3^2 mu2^2
    t1 = 4 * np.array([p, q, p, q, p, q])
    m = 1 + g ** 2
    k1, k2 = r2 ** 2, r1 ** 2                         # A1^2 D3^2 and C1^2 B3^2
    t2 = np.array([
        (k1 + k2),
        (k1 + k2) * g ** 2,
        k1 * m,
        k2 * m,
        k2 * m,
        k1 * m,
    ])
    return gx, t0, t1, t2


def la2b2_multipliers(g, r1, r2) -> tuple[float, float, float]:
    """Closed-form multipliers of the reduced la2b2 Lagrangian as functions of the ratios."""
    l0 = (r2 * (1 - g ** 2 * r1 ** 2 * r2 ** 2) * (g ** 2 * r2 ** 2 - r1 ** 2)
          / (2 * g * (1 + g ** 2) * r1 * (1 - r2 ** 4) * (1 - r1 ** 2 * r2 ** 2)))
    l1 = (1 - g ** 2) * r1 * r2 / (g * (1 - r1 ** 2 * r2 ** 2))
    l2 = (4 * r2 * (r1 ** 2 - g ** 2) * (1 - g ** 2 * r1 ** 2 * r2 ** 2)
          / (g * (1 + g ** 2) * r1 * (1 - r2 ** 2) * (1 - r1 ** 2 * r2 ** 2)))
    return l0, l1, l2


def la2b2_stationarity_residuals(g, r1, r2) -> np.ndarray:
    gx, t0, t1, t2 = _la2b2_gradients(g, r1, r2)
    l0, l1, l2 = la2b2_multipliers(g, r1, r2)
    return gx + l0 * t0 + l1 * t1 + l2 * t2


def stationarity_check_la2b2(g: float, r1: float, r2: float, tol: float = 1e-10) -> bool:
    """True iff the closed-form multipliers make every remaining Lagrange equation vanish."""
    with np.errstate(all="ignore"):
        r = la2b2_stationarity_residuals(g, r1, r2)
    return bool(np.all(np.isfinite(r)) and np.max(np.abs(r)) < tol)
