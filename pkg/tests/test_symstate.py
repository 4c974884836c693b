from __future__ import annotations

import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ghz4.slocc import apply_local, phase_rotation, permute_qubits
from ghz4.symstate import (EVEN2, ODD, ParamPoint, SymmetricState, alphas_from_yz, from_point,
                           hs_distance, in_tetrahedron, is_physical, make_state, mirror_conjugate,
                           mirror_unitary, normalize, pure_state_from_json, pure_state_to_json,
                           to_density, to_point, twirl, vertex_states, vertices)

S7 = math.sqrt(7 / 32)
GHZP = (0.5, 0.0, 0.0, 0.5)
MIXED = (1 / 16, 1 / 16, 1 / 16, 0.0)
PI3 = (0.0, 0.0, 1 / 6, 0.0)
PI4 = (0.0, 1 / 8, 0.0, 0.0)


def close(p: ParamPoint, q, tol=1e-12):
    return np.allclose(p.as_array(), np.asarray(q, dtype=float), atol=tol, rtol=0)


# --- construction and coordinates --------------------------------------------------

def test_make_state_rejects_non_finite():
    with pytest.raises(ValueError):
        make_state(math.nan, 0, 0, 0)
    with pytest.raises(ValueError):
        make_state(0.5, 0, 0, math.inf)


def test_make_state_keeps_unphysical_records():
    s = make_state(0.5, 0, 0, 0.6)
    assert s.beta == 0.6


@pytest.mark.parametrize("params, point", [
    (GHZP, (0.5, S7, 0.0)),
    (MIXED, (0.0, 0.0, 0.0)),
    (PI4, (0.0, -(1 / 8) * math.sqrt(2 / 7), math.sqrt(21) / 28)),
    (PI3, (0.0, -(1 / 8) * math.sqrt(2 / 7), -1 / math.sqrt(21))),
])
def test_to_point_examples(params, point):
    assert close(to_point(make_state(*params)), point)


def test_to_point_rejects_trace_violation():
    with pytest.raises(ValueError):
        to_point(make_state(0.5, 0.1, 0, 0))


@pytest.mark.parametrize("point, params", [
    ((0.5, S7, 0.0), GHZP),
    ((0.0, 0.0, 0.0), MIXED),
    ((0.25, 3 * math.sqrt(14) / 56, -1 / (2 * math.sqrt(21))), (0.25, 0.0, 1 / 12, 0.25)),
])
def test_from_point_examples(point, params):
    s = from_point(ParamPoint(*point))
    assert np.allclose([s.alpha1, s.alpha2, s.alpha3, s.beta], params, atol=1e-12)


def test_from_point_allows_points_outside():
    s = from_point(ParamPoint(0.0, 1.0, 1.0))
    assert not is_physical(s)[0]


# --- density matrix ------------------------------------------------------------

def test_density_of_mixed_is_identity():
    assert np.allclose(to_density(make_state(*MIXED)), np.eye(16) / 16, atol=1e-15)


def test_density_of_ghz_is_projector():
    g = vertex_states()["P1"]
    assert np.allclose(to_density(make_state(*GHZP)), np.outer(g, g.conj()), atol=1e-15)


def test_density_of_pi3_is_uniform_two_excitation_mixture():
    rho = to_density(make_state(*PI3))
    assert np.allclose(np.diag(rho).real, EVEN2 / 6.0)
    assert np.count_nonzero(rho - np.diag(np.diag(rho))) == 0


def test_density_layout_and_hermiticity():
    s = make_state(0.2, 0.03, (0.5 - 0.2 - 0.12) / 3, 0.07)
    rho = to_density(s)
    diag = np.diag(rho).real
    expected = [s.alpha1, s.alpha2, s.alpha2, s.alpha3, s.alpha2, s.alpha3, s.alpha3, s.alpha2,
                s.alpha2, s.alpha3, s.alpha3, s.alpha2, s.alpha3, s.alpha2, s.alpha2, s.alpha1]
    assert np.allclose(diag, expected)
    off = rho - np.diag(np.diag(rho))
    assert np.count_nonzero(off) == 2 and off[0, 15] == off[15, 0] == 0.07
    assert np.allclose(rho, rho.conj().T)
    assert abs(np.trace(rho) - 1) < 1e-12


# --- metric -----------------------------------------------------------------------

def test_hs_distance_examples():
    gp, gm, mix = make_state(*GHZP), make_state(0.5, 0, 0, -0.5), make_state(*MIXED)
    assert hs_distance(gp, gp) == 0
    assert abs(hs_distance(gp, gm) - 1.0) < 1e-12
    assert abs(hs_distance(gp, mix) - math.sqrt(15 / 32)) < 1e-12


alpha = st.floats(-0.3, 0.8, allow_nan=False)
coh = st.floats(-0.8, 0.8, allow_nan=False)


def _state(a1, a2, b):
    return make_state(a1, a2, (0.5 - a1 - 4 * a2) / 3, b)


@given(alpha, alpha, coh, alpha, alpha, coh)
def test_isometry_property(a1, a2, b, c1, c2, d):
    s, t = _state(a1, a2, b), _state(c1, c2, d)
    e = np.linalg.norm(to_point(s).as_array() - to_point(t).as_array())
    assert abs(hs_distance(s, t) - e) < 1e-12


@given(alpha, alpha, coh)
def test_round_trip_state(a1, a2, b):
    s = _state(a1, a2, b)
    r = from_point(to_point(s))
    assert np.allclose([r.alpha1, r.alpha2, r.alpha3, r.beta], [s.alpha1, s.alpha2, s.alpha3, s.beta],
                       atol=1e-12, rtol=0)


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_round_trip_point(x, y, z):
    p = ParamPoint(x, y, z)
    assert close(to_point(from_point(p)), (x, y, z))


def test_alphas_from_yz_matches_from_point():
    a = alphas_from_yz(0.1, -0.05)
    s = from_point(ParamPoint(0.3, 0.1, -0.05))
    assert np.allclose(a, (s.alpha1, s.alpha2, s.alpha3))


# --- physicality ----------------------------------------------------------------------

def test_is_physical_examples():
    assert is_physical(make_state(*GHZP))[0]
    ok, bad = is_physical(make_state(0.5, 0, 0, 0.6))
    assert not ok and any("alpha1 - beta" in b for b in bad)
    ok, bad = is_physical(make_state(0, 1 / 8, 0, 0.01))
    assert not ok and any("alpha1 - beta" in b for b in bad)


def test_boundary_counts_as_physical():
    for p, _ in vertices().values():
        assert is_physical(from_point(p))[0]


@given(st.floats(-0.6, 0.6), st.floats(-0.2, 0.5), st.floats(-0.3, 0.25))
def test_physical_iff_in_tetrahedron(x, y, z):
    p = ParamPoint(x, y, z)
    assert is_physical(from_point(p), 1e-12)[0] == in_tetrahedron(p, 1e-12)


# --- twirl --------------------------------------------------------------------------

def test_twirl_examples():
    st_ = vertex_states()
    s = twirl(st_["P1"])
    assert np.allclose([s.alpha1, s.alpha2, s.alpha3, s.beta], GHZP)
    s = twirl(st_["P3"])
    assert np.allclose([s.alpha1, s.alpha2, s.alpha3, s.beta], PI3)
    psi = np.zeros(16, complex)
    psi[0] = psi[0b0111] = math.sqrt(0.5)
    s = twirl(psi)
    assert np.allclose([s.alpha1, s.alpha2, s.alpha3, s.beta], (0.25, 1 / 16, 0, 0))


def test_twirl_rejects_unnormalized():
    with pytest.raises(ValueError):
        twirl(np.ones(16))


def test_twirl_coherence_is_real_part():
    psi = np.zeros(16, complex)
    psi[0], psi[15] = math.sqrt(0.5), 1j * math.sqrt(0.5)
    assert abs(twirl(psi).beta) < 1e-15
    psi[15] = math.sqrt(0.5) * np.exp(1j * 0.3)
    assert abs(twirl(psi).beta - 0.5 * math.cos(0.3)) < 1e-15


def _random_pure(seed):
    r = np.random.default_rng(seed)
    return normalize(r.normal(size=16) + 1j * r.normal(size=16))


@given(st.integers(0, 10_000), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_twirl_invariant_under_phase_rotations(seed, f1, f2, f3):
    psi = _random_pure(seed)
    a, b = twirl(psi), twirl(apply_local(phase_rotation(f1, f2, f3), psi))
    assert np.allclose([a.alpha1, a.alpha2, a.alpha3, a.beta],
                       [b.alpha1, b.alpha2, b.alpha3, b.beta], atol=1e-12)


@given(st.integers(0, 10_000), st.permutations(range(4)))
def test_twirl_invariant_under_permutations(seed, perm):
    psi = _random_pure(seed)
    a, b = twirl(psi), twirl(permute_qubits(psi, perm))
    assert np.allclose([a.alpha1, a.alpha2, a.alpha3, a.beta],
                       [b.alpha1, b.alpha2, b.alpha3, b.beta], atol=1e-12)


@given(st.integers(0, 10_000))
def test_twirl_normalization_and_physical(seed):
    s = twirl(_random_pure(seed))
    assert abs(2 * s.alpha1 + 8 * s.alpha2 + 6 * s.alpha3 - 1) < 1e-12
    assert is_physical(s)[0]


def test_odd_and_even_masks():
    assert ODD.sum() == 8 and EVEN2.sum() == 6


# --- vertices and mirror -----------------------------------------------------------------

def test_vertices_exact():
    v = vertices()
    assert close(v["P1"][0], (0.5, S7, 0))
    assert close(v["P2"][0], (-0.5, S7, 0))
    assert close(v["P3"][0], (0, -(1 / 8) * math.sqrt(2 / 7), -1 / math.sqrt(21)))
    assert close(v["P4"][0], (0, -(1 / 8) * math.sqrt(2 / 7), math.sqrt(21) / 28))
    for k, psi in vertex_states().items():
        assert close(to_point(twirl(psi)), v[k][0].as_array())
        assert close(to_point(v[k][1]), v[k][0].as_array())


def test_mirror_examples():
    m = mirror_conjugate(make_state(*GHZP))
    assert (m.alpha1, m.beta) == (0.5, -0.5)
    s = make_state(*MIXED)
    assert mirror_conjugate(s) == s
    m = mirror_conjugate(make_state(0.25, 0, 1 / 12, 0.25))
    assert m == SymmetricState(0.25, 0, 1 / 12, -0.25)


def test_mirror_unitary_is_unitary():
    u = mirror_unitary()
    assert np.allclose(u @ u.conj().T, np.eye(16))


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_mirror_property(w1, w2, w3, w4):
    w = np.array([w1, w2, w3, w4]) + 1e-9
    w /= w.sum()
    pts = np.array([p.as_array() for p, _ in vertices().values()])
    x, y, z = w @ pts
    s = from_point(ParamPoint(x, y, z))
    m = mirror_conjugate(s, check=True)
    assert close(to_point(m), (-x, y, z))


# --- serialization ----------------------------------------------------------------------

def test_state_json_round_trip():
    s = make_state(0.2, 0.03, 0.06, -0.1)
    d = json.loads(json.dumps(s.to_json()))
    assert SymmetricState.from_json(d) == s


def test_pure_state_json_round_trip():
    psi = _random_pure(3)
    back = pure_state_from_json(json.loads(json.dumps(pure_state_to_json(psi))))
    assert np.array_equal(back, psi)
    with pytest.raises(ValueError):
        pure_state_from_json([[1, 0]] * 15)


def test_tetrahedron_corners_by_bit_strings():
    # every computational basis state twirls onto P3, P4 or the GHZ edge
    for bits in itertools.product("01", repeat=4):
        psi = np.zeros(16, complex)
        psi[int("".join(bits), 2)] = 1
        assert is_physical(twirl(psi))[0]
