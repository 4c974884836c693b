"""Four-qubit GHZ-symmetric states.

The family is fixed by three diagonal weights and one real coherence:

    rho = beta (|0000><1111| + h.c.)
        + diag(a1, a2, a2, a3, a2, a3, a3, a2, a2, a3, a3, a2, a3, a2, a2, a1)

with a1 + 4 a2 + 3 a3 = 1/2. Basis index is 8i + 4j + 2k + l for |ijkl>.
The coordinates (x, y, z) make the Hilbert-Schmidt metric Euclidean.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

TRACE_TOL = 1e-12
PHYS_TOL = 1e-12
NORM_TOL = 1e-9

_SQ_8_7 = math.sqrt(8.0 / 7.0)
_SQ_28_3 = math.sqrt(28.0 / 3.0)

WEIGHT = np.array([bin(i).count("1") for i in range(16)])
ODD = WEIGHT % 2 == 1
EVEN2 = WEIGHT == 2
# diagonal slot of each basis state: 0 -> alpha1, 1 -> alpha2, 2 -> alpha3
SLOT = np.where(ODD, 1, np.where(EVEN2, 2, 0))

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)


@dataclass(frozen=True)
class SymmetricState:
    alpha1: float
    alpha2: float
    alpha3: float
    beta: float

    @property
    def trace_defect(self) -> float:
        return self.alpha1 + 4 * self.alpha2 + 3 * self.alpha3 - 0.5

    def to_json(self) -> dict:
        return {"alpha1": self.alpha1, "alpha2": self.alpha2,
                "alpha3": self.alpha3, "beta": self.beta}

    @classmethod
    def from_json(cls, d: dict) -> "SymmetricState":
        return make_state(d["alpha1"], d["alpha2"], d["alpha3"], d["beta"])


@dataclass(frozen=True)
class ParamPoint:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def make_state(alpha1, alpha2, alpha3, beta) -> SymmetricState:
    vals = [float(v) for v in (alpha1, alpha2, alpha3, beta)]
    if not all(math.isfinite(v) for v in vals):
        raise ValueError(f"non-finite state parameters: {vals}")
    return SymmetricState(*vals)


def _check_trace(s: SymmetricState) -> None:
    if abs(s.trace_defect) > TRACE_TOL:
        raise ValueError(f"trace constraint violated by {s.trace_defect:.3e}")


def to_point(s: SymmetricState) -> ParamPoint:
    _check_trace(s)
    return ParamPoint(
        s.beta,
        _SQ_8_7 * (s.alpha1 - 1.0 / 16.0),
        _SQ_28_3 * (s.alpha1 / 7.0 + s.alpha2 - 1.0 / 14.0),
    )


def alphas_from_yz(y: float, z: float) -> tuple[float, float, float]:
    a1 = 1.0 / 16.0 + math.sqrt(7.0 / 8.0) * y
    a2 = math.sqrt(3.0 / 28.0) * z + 1.0 / 14.0 - a1 / 7.0
    a3 = (0.5 - a1 - 4.0 * a2) / 3.0
    return a1, a2, a3


def from_point(p: ParamPoint) -> SymmetricState:
    """Inverse coordinate map. Physicality is not enforced."""
    a1, a2, a3 = alphas_from_yz(p.y, p.z)
    return make_state(a1, a2, a3, p.x)


def to_density(s: SymmetricState) -> np.ndarray:
    _check_trace(s)
    diag = np.array([s.alpha1, s.alpha2, s.alpha3])[SLOT]
    rho = np.diag(diag).astype(complex)
    rho[0, 15] = rho[15, 0] = s.beta
    return rho


def hs_distance(a: SymmetricState, b: SymmetricState) -> float:
    d = to_density(a) - to_density(b)
    return math.sqrt(0.5 * np.real(np.trace(d.conj().T @ d)))


def is_physical(s: SymmetricState, tol: float = PHYS_TOL) -> tuple[bool, list[str]]:
    """Check the interval conditions; returns (ok, list of violated conditions)."""
    a1, a2, a3, x = s.alpha1, s.alpha2, s.alpha3, s.beta
    checks = {
        "0 <= alpha2 <= 1/8": -tol <= a2 <= 0.125 + tol,
        "0 <= alpha3 <= 1/6": -tol <= a3 <= 1.0 / 6.0 + tol,
        "0 <= alpha1 <= 1/2": -tol <= a1 <= 0.5 + tol,
        "0 <= alpha1 + beta <= 1": -tol <= a1 + x <= 1 + tol,
        "0 <= alpha1 - beta <= 1": -tol <= a1 - x <= 1 + tol,
    }
    if abs(s.trace_defect) > TRACE_TOL:
        checks["alpha1 + 4 alpha2 + 3 alpha3 = 1/2"] = False
    bad = [k for k, ok in checks.items() if not ok]
    return not bad, bad


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(16)
    n = np.linalg.norm(psi)
    if n == 0:
        raise ValueError("zero state vector")
    return psi / n


def twirl(psi) -> SymmetricState:
    """Project a normalized pure state onto the symmetric family (closed form)."""
    psi = np.asarray(psi, dtype=complex).reshape(16)
    p = np.abs(psi) ** 2
    if abs(p.sum() - 1.0) > NORM_TOL:
        raise ValueError(f"state not normalized (norm^2 = {p.sum():.12g})")
    x = float(np.real(psi[0] * np.conj(psi[15])))
    a1 = 0.5 * (p[0] + p[15])
    a2 = p[ODD].sum() / 8.0
    a3 = p[EVEN2].sum() / 6.0
    return make_state(a1, a2, a3, x)


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(16, dtype=complex)
    v[int(bits, 2)] = 1
    return v


def vertex_states() -> dict[str, np.ndarray]:
    """Pure states whose twirls sit at P1 (GHZ+), P2 (GHZ-), P3 and P4."""
    r2 = math.sqrt(0.5)
    return {
        "P1": r2 * (_ket("0000") + _ket("1111")),
        "P2": r2 * (_ket("0000") - _ket("1111")),
        "P3": _ket("0110"),
        "P4": _ket("0001"),
    }


def vertices() -> dict[str, tuple[ParamPoint, SymmetricState]]:
    q = -math.sqrt(2.0 / 7.0) / 8.0
    return {
        "P1": (ParamPoint(0.5, math.sqrt(7.0 / 32.0), 0.0), SymmetricState(0.5, 0.0, 0.0, 0.5)),
        "P2": (ParamPoint(-0.5, math.sqrt(7.0 / 32.0), 0.0), SymmetricState(0.5, 0.0, 0.0, -0.5)),
        "P3": (ParamPoint(0.0, q, -1.0 / math.sqrt(21.0)), SymmetricState(0.0, 0.0, 1.0 / 6.0, 0.0)),
        "P4": (ParamPoint(0.0, q, math.sqrt(21.0) / 28.0), SymmetricState(0.0, 0.125, 0.0, 0.0)),
    }


def mirror_unitary() -> np.ndarray:
    u = 1j * _SX
    for _ in range(3):
        u = np.kron(u, _SY)
    return u


def mirror_conjugate(s: SymmetricState, check: bool = True) -> SymmetricState:
    """beta -> -beta. With check=True, confirm u rho u^dag reproduces the result."""
    out = SymmetricState(s.alpha1, s.alpha2, s.alpha3, -s.beta)
    if check:
        u = mirror_unitary()
        err = np.abs(u @ to_density(s) @ u.conj().T - to_density(out)).max()
        assert err <= 1e-12, f"mirror conjugation mismatch {err:.3e}"
    return out


def in_tetrahedron(p: ParamPoint, tol: float = PHYS_TOL) -> bool:
    """Barycentric containment against P1..P4."""
    v = np.array([q.as_array() for q, _ in vertices().values()])
    m = np.vstack([(v[1:] - v[0]).T])
    lam = np.linalg.solve(m, p.as_array() - v[0])
    bary = np.concatenate([[1 - lam.sum()], lam])
    return bool(np.all(bary >= -tol))


def pure_state_to_json(psi) -> list:
    psi = np.asarray(psi, dtype=complex).reshape(16)
    return [[float(c.real), float(c.imag)] for c in psi]


def pure_state_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != (16, 2):
        raise ValueError(f"expected 16 [re, im] pairs, got shape {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


def dumps_state(s: SymmetricState) -> str:
    return json.dumps(s.to_json(), indent=2)


def landmarks() -> dict[str, ParamPoint]:
    """Vertices plus the corner points of the labc2 rectangle and l031031 triangles."""
    s14, s21 = math.sqrt(14.0), math.sqrt(21.0)
    z_y, z_z = 3 * s14 / 56, -1 / (2 * s21)
    r_y, r_z = 3 / (4 * s14), s21 / 56
    out = {k: p for k, (p, _) in vertices().items()}
    out.update(
        z1=ParamPoint(0.25, z_y, z_z),
        z2=ParamPoint(0.0, math.sqrt(7.0 / 32.0), 0.0),
        z3=ParamPoint(-0.25, z_y, z_z),
        r1=ParamPoint(0.25, r_y, r_z),
        r2=ParamPoint(-0.25, r_y, r_z),
        origin=ParamPoint(0.0, 0.0, 0.0),
    )
    return out
