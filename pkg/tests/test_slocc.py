from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ghz4.slocc import (LA4_VARIANT, LA4_REDUCED, SOLVED, UNSOLVED, ClassParams, LocalOp,
                        SloccClass, UnsupportedClassError, apply_local, degenerate_representative,
                        ket, permute_qubits, phase_rotation, representative)
from ghz4.symstate import normalize, twirl

TAGS = ["gabcd", "labc2", "la2b2", "lab3", "la4", "la2o31", "l053", "l071", "l031031"]


def support(psi, tol=1e-12):
    return {format(i, "04b"): psi[i] for i in np.flatnonzero(np.abs(psi) > tol)}


def test_class_tags_are_frozen():
    assert [c.value for c in SloccClass] == TAGS
    assert set(SOLVED) | set(UNSOLVED) | {SloccClass.GABCD} == set(SloccClass)


def test_parse_rejects_unknown_tag():
    assert SloccClass.parse("LA4") is SloccClass.LA4
    with pytest.raises(ValueError, match="expected one of"):
        SloccClass.parse("lx")


def test_params_require_nonnegative_real_part():
    ClassParams(a=1j, b=0.5)
    with pytest.raises(ValueError):
        ClassParams(a=-0.1)


def test_representative_examples():
    assert support(representative("labc2")) == {"0110": 1}
    assert support(representative("la2b2")) == {"0110": 1, "0011": 1}
    g = representative("gabcd", ClassParams(a=1, d=1))
    assert support(g) == {"0000": 1, "1111": 1}


def test_representative_rejects_extra_parameters():
    with pytest.raises(ValueError):
        representative("l031031", ClassParams(a=1))
    with pytest.raises(ValueError):
        representative("la2o31", ClassParams(a=1, b=1))


@pytest.mark.parametrize("tag", TAGS)
def test_every_class_is_constructible(tag):
    p = ClassParams(a=0.3, b=0.2, c=0.1, d=0.7)
    n = {"gabcd": 4, "labc2": 3, "la2b2": 2, "lab3": 2, "la4": 1, "la2o31": 1}.get(tag, 0)
    kw = dict(zip("abcd", [0.3, 0.2, 0.1, 0.7][:n]))
    psi = representative(tag, ClassParams(**kw))
    assert np.linalg.norm(psi) > 0
    assert p.a == 0.3


def test_degenerate_anchors():
    r2, r3 = 1 / math.sqrt(2), 1 / math.sqrt(3)
    assert support(degenerate_representative("labc2")) == {"0110": 1}
    assert np.allclose(list(support(degenerate_representative("la2b2")).values()), r2)
    d = support(degenerate_representative("l031031"))
    assert set(d) == {"0000", "0111"} and np.allclose(list(d.values()), r2)
    d = support(degenerate_representative("la2o31"))
    assert set(d) == {"0011", "0101", "0110"} and np.allclose(list(d.values()), r3)
    assert set(support(degenerate_representative("la4"))) == set(LA4_REDUCED)
    assert set(support(degenerate_representative("la4", la4_form="variant"))) == set(LA4_VARIANT)
    with pytest.raises(ValueError):
        degenerate_representative("la4", la4_form="other")


@pytest.mark.parametrize("tag", ["lab3", "l053", "l071", "gabcd"])
def test_no_anchor_for_unsolved(tag):
    with pytest.raises(UnsupportedClassError, match="no analytic anchor"):
        degenerate_representative(tag)


def test_la4_reduction_chain():
    """a = 0 representative maps onto the reduced anchor by local operations and a swap."""
    psi = representative("la4")
    sy = np.array([[0, -1j], [1j, 0]])
    eye = np.eye(2)
    t = apply_local(LocalOp((eye, np.diag([-1j, 1]), eye, eye)), psi)
    t = apply_local(LocalOp((eye, eye, sy, sy)), t)
    t = permute_qubits(t, (0, 1, 3, 2))
    assert np.allclose(t, degenerate_representative("la4"))


def test_local_op_validation_and_json():
    with pytest.raises(ValueError):
        LocalOp((np.eye(2),) * 3)
    op = LocalOp((np.array([[1, 2j], [0.5, 1]]), np.eye(2), np.eye(2) * 2, np.eye(2)))
    back = LocalOp.from_json(json.loads(json.dumps(op.to_json())))
    assert all(np.array_equal(a, b) for a, b in zip(op.mats, back.mats))
    assert op.is_invertible()
    sing = LocalOp((np.ones((2, 2)),) + (np.eye(2),) * 3)
    assert not sing.is_invertible()


def test_local_op_composition():
    a = LocalOp(tuple(np.array([[1, k], [0, 1]], dtype=complex) for k in range(4)))
    b = LocalOp(tuple(np.array([[2, 0], [k, 1]], dtype=complex) for k in range(4)))
    psi = normalize(np.arange(16) + 1.0)
    assert np.allclose(apply_local(a @ b, psi), apply_local(a, apply_local(b, psi)))


def test_apply_local_examples():
    psi = normalize(np.arange(16) + 1j)
    assert np.allclose(apply_local(LocalOp.identity(), psi), psi)
    g = ket("0000")
    out = apply_local(phase_rotation(0.3, -0.7, 1.1), g)
    assert abs(abs(out[0]) - 1) < 1e-15
    assert twirl(out) == twirl(g)
    A, D = [1.5, 0.5, 2.0, 0.7], [0.3, 1.2, 0.9, 2.5]
    op = LocalOp(tuple(np.diag([a, d]).astype(complex) for a, d in zip(A, D)))
    out = apply_local(op, ket("0110"))
    assert support(out) == {"0110": pytest.approx(1.0)}


@given(st.integers(0, 1000))
def test_apply_local_matches_kron(seed):
    r = np.random.default_rng(seed)
    mats = tuple(r.normal(size=(2, 2)) + 1j * r.normal(size=(2, 2)) for _ in range(4))
    psi = normalize(r.normal(size=16) + 1j * r.normal(size=16))
    big = np.kron(np.kron(mats[0], mats[1]), np.kron(mats[2], mats[3]))
    assert np.allclose(apply_local(LocalOp(mats), psi), normalize(big @ psi), atol=1e-12)


def test_permute_qubits():
    assert support(permute_qubits(ket("0001"), (3, 0, 1, 2))) == {"1000": 1}
