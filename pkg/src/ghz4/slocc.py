"""Representative states of the nine four-qubit SLOCC classes and local operations."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .symstate import normalize


class SloccClass(enum.Enum):
    GABCD = "gabcd"
    LABC2 = "labc2"
    LA2B2 = "la2b2"
    LAB3 = "lab3"
    LA4 = "la4"
    LA2O31 = "la2o31"
    L053 = "l053"
    L071 = "l071"
    L031031 = "l031031"

    @classmethod
    def parse(cls, tag: "str | SloccClass") -> "SloccClass":
        if isinstance(tag, SloccClass):
            return tag
        try:
            return cls(tag.lower())
        except ValueError:
            valid = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown class tag {tag!r}; expected one of {valid}") from None


SOLVED = (SloccClass.LABC2, SloccClass.LA2B2, SloccClass.LA2O31,
          SloccClass.L031031, SloccClass.LA4)
UNSOLVED = (SloccClass.LAB3, SloccClass.L053, SloccClass.L071)

_NPARAMS = {
    SloccClass.GABCD: 4, SloccClass.LABC2: 3, SloccClass.LA2B2: 2,
    SloccClass.LAB3: 2, SloccClass.LA4: 1, SloccClass.LA2O31: 1,
    SloccClass.L053: 0, SloccClass.L071: 0, SloccClass.L031031: 0,
}


class UnsupportedClassError(ValueError):
    pass


UNSUPPORTED_MSG = ("class {cls} has no analytic boundary: lab3, l053 and l071 are left "
                   "unanalyzed in the source classification, only gabcd and the five solved "
                   "classes (labc2, la2b2, la2o31, l031031, la4) are supported")


@dataclass(frozen=True)
class ClassParams:
    a: complex = 0j
    b: complex = 0j
    c: complex = 0j
    d: complex = 0j

    def __post_init__(self):
        for name in "abcd":
            if complex(getattr(self, name)).real < 0:
                raise ValueError(f"parameter {name} must have nonnegative real part")


@dataclass(frozen=True)
class LocalOp:
    """One 2x2 complex matrix per qubit; entry [r, c] maps |c> to |r>."""
    mats: tuple

    def __post_init__(self):
        mats = tuple(np.asarray(m, dtype=complex).reshape(2, 2) for m in self.mats)
        if len(mats) != 4:
            raise ValueError("LocalOp needs exactly four 2x2 matrices")
        object.__setattr__(self, "mats", mats)

    @classmethod
    def identity(cls) -> "LocalOp":
        return cls(tuple(np.eye(2) for _ in range(4)))

    def dets(self) -> np.ndarray:
        return np.array([np.linalg.det(m) for m in self.mats])

    def is_invertible(self, tol: float = 1e-10) -> bool:
        return bool(np.all(np.abs(self.dets()) >= tol))

    def __matmul__(self, other: "LocalOp") -> "LocalOp":
        return LocalOp(tuple(a @ b for a, b in zip(self.mats, other.mats)))

    def to_json(self) -> list:
        return [[[[float(v.real), float(v.imag)] for v in row] for row in m] for m in self.mats]

    @classmethod
    def from_json(cls, data) -> "LocalOp":
        arr = np.asarray(data, dtype=float)
        if arr.shape != (4, 2, 2, 2):
            raise ValueError(f"LocalOp JSON must have shape (4, 2, 2, 2), got {arr.shape}")
        return cls(tuple(arr[q, :, :, 0] + 1j * arr[q, :, :, 1] for q in range(4)))


def ket(*terms) -> np.ndarray:
    """Sum coefficient * |bits> over (coefficient, bits) pairs or bare bit strings."""
    v = np.zeros(16, dtype=complex)
    for t in terms:
        coef, bits = (1, t) if isinstance(t, str) else t
        v[int(bits, 2)] += coef
    return v


def representative(cls: "SloccClass | str", p: ClassParams | None = None) -> np.ndarray:
    """Unnormalized representative of a class with the given parameters."""
    cls = SloccClass.parse(cls)
    p = p or ClassParams()
    used = _NPARAMS[cls]
    extra = [n for n in "abcd"[used:] if complex(getattr(p, n)) != 0]
    if extra:
        raise ValueError(f"class {cls.value} takes {used} parameter(s); got nonzero {extra}")
    a, b, c, d = (complex(getattr(p, n)) for n in "abcd")
    s2 = 1 / math.sqrt(2)
    if cls is SloccClass.GABCD:
        return ket(((a + d) / 2, "0000"), ((a + d) / 2, "1111"),
                   ((a - d) / 2, "0011"), ((a - d) / 2, "1100"),
                   ((b + c) / 2, "0101"), ((b + c) / 2, "1010"),
                   ((b - c) / 2, "0110"), ((b - c) / 2, "1001"))
    if cls is SloccClass.LABC2:
        return ket(((a + b) / 2, "0000"), ((a + b) / 2, "1111"),
                   ((a - b) / 2, "0011"), ((a - b) / 2, "1100"),
                   (c, "0101"), (c, "1010"), "0110")
    if cls is SloccClass.LA2B2:
        return ket((a, "0000"), (a, "1111"), (b, "0101"), (b, "1010"), "0110", "0011")
    if cls is SloccClass.LAB3:
        return ket((a, "0000"), (a, "1111"),
                   ((a + b) / 2, "0101"), ((a + b) / 2, "1010"),
                   ((a - b) / 2, "0110"), ((a - b) / 2, "1001"),
                   (1j * s2, "0001"), (1j * s2, "0010"), (1j * s2, "0111"), (1j * s2, "1011"))
    if cls is SloccClass.LA4:
        return ket((a, "0000"), (a, "0101"), (a, "1010"), (a, "1111"),
                   (1j, "0001"), "0110", (-1j, "1011"))
    if cls is SloccClass.LA2O31:
        return ket((a, "0000"), (a, "1111"), "0011", "0101", "0110")
    if cls is SloccClass.L053:
        return ket("0000", "0101", "1000", "1110")
    if cls is SloccClass.L071:
        return ket("0000", "1011", "1101", "1110")
    return ket("0000", "0111")


LA4_REDUCED = ("0001", "0110", "1000")
LA4_VARIANT = ("0001", "0111", "1000")


def degenerate_representative(cls: "SloccClass | str", la4_form: str = "reduced") -> np.ndarray:
    """Normalized parameter-free anchor state used for the boundary of a solved class.

    For la4, ``la4_form="reduced"`` gives |0001>+|0110>+|1000> and
    ``la4_form="variant"`` gives |0001>+|0111>+|1000>.
    """
    cls = SloccClass.parse(cls)
    if cls is SloccClass.LABC2:
        v = ket("0110")
    elif cls is SloccClass.LA2B2:
        v = ket("0110", "0011")
    elif cls is SloccClass.LA2O31:
        v = ket("0011", "0101", "0110")
    elif cls is SloccClass.L031031:
        v = ket("0000", "0111")
    elif cls is SloccClass.LA4:
        forms = {"reduced": LA4_REDUCED, "variant": LA4_VARIANT}
        if la4_form not in forms:
            raise ValueError(f"la4_form must be one of {sorted(forms)}")
        v = ket(*forms[la4_form])
    else:
        raise UnsupportedClassError(f"no analytic anchor for class {cls.value}")
    return normalize(v)


def apply_local(op: LocalOp, psi) -> np.ndarray:
    """(m1 x m2 x m3 x m4) |psi>, normalized."""
    t = np.asarray(psi, dtype=complex).reshape(2, 2, 2, 2)
    m1, m2, m3, m4 = op.mats
    t = np.einsum("ai,bj,ck,dl,ijkl->abcd", m1, m2, m3, m4, t, optimize=True)
    n = np.linalg.norm(t)
    assert n > 0, "local operation annihilated the state"
    return (t / n).reshape(16)


def phase_rotation(phi1: float, phi2: float, phi3: float) -> LocalOp:
    """exp(i phi1 Z) x exp(i phi2 Z) x exp(i phi3 Z) x exp(-i(phi1+phi2+phi3) Z)."""
    def rz(t):
        return np.diag([np.exp(1j * t), np.exp(-1j * t)])
    return LocalOp((rz(phi1), rz(phi2), rz(phi3), rz(-(phi1 + phi2 + phi3))))


def permute_qubits(psi, perm) -> np.ndarray:
    """Reorder tensor factors: new qubit k carries old qubit perm[k]."""
    return np.transpose(np.asarray(psi).reshape(2, 2, 2, 2), perm).reshape(16)
