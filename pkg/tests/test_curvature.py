import itertools

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from conftest import random_jmap
from solvgeo.curvature import (
    closed_form_connection,
    connection,
    curvature,
    mean_curvature,
    solvable_curvature,
    symmetry_residuals,
)
from solvgeo.lie_model import (
    JMap,
    MetricLieAlgebra,
    heisenberg_algebra,
    hyperbolic_algebra,
    solvable_extension,
)

J_ROT = np.array([[0.0, -1.0], [1.0, 0.0]])


def heis3():
    return JMap.create(J_ROT[None, :, :])


# ---------------------------------------------------------------------------
# spaces with known curvature


@pytest.mark.parametrize("m,c", [(2, 1.0), (3, 2.0), (5, 0.5)])
def test_hyperbolic_space_constant_curvature(m, c):
    curv = curvature(hyperbolic_algebra(m, c))
    n = m + 1
    for i, j in itertools.combinations(range(n), 2):
        assert curv.sectional_frame(i, j) == pytest.approx(-c * c / 4, abs=1e-12)
    want = -(n - 1) * c * c / 4
    assert np.allclose(curv.ricci, want * np.eye(n), atol=1e-12)
    assert curv.scalar == pytest.approx(n * want, abs=1e-12)


def test_heisenberg3_curvature_frozen():
    curv = curvature(heisenberg_algebra(heis3()))
    assert curv.sectional_frame(0, 1) == pytest.approx(-0.75, abs=1e-14)
    assert curv.sectional_frame(0, 2) == pytest.approx(0.25, abs=1e-14)
    assert curv.sectional_frame(1, 2) == pytest.approx(0.25, abs=1e-14)
    assert np.allclose(np.diag(curv.ricci), [-0.5, -0.5, 0.5], atol=1e-14)
    assert curv.scalar == pytest.approx(-0.5, abs=1e-14)


def test_two_step_sectional_closed_forms():
    rng = np.random.default_rng(41)
    jm = random_jmap(rng, 4, 3)
    curv = curvature(heisenberg_algebra(jm))
    m, k = jm.m, jm.k
    for a, b in itertools.combinations(range(m), 2):
        w = np.array([jm.J[i][b, a] for i in range(k)])
        assert curv.sectional_frame(a, b) == pytest.approx(-0.75 * (w @ w), rel=1e-10, abs=1e-12)
    for a in range(m):
        for i in range(k):
            jx = jm.J[i] @ np.eye(m)[a]
            assert curv.sectional_frame(a, m + i) == pytest.approx(
                0.25 * (jx @ jx), rel=1e-10, abs=1e-12
            )
    for i, j in itertools.combinations(range(k), 2):
        assert curv.sectional_frame(m + i, m + j) == pytest.approx(0.0, abs=1e-12)


def test_two_step_ricci_closed_form():
    rng = np.random.default_rng(42)
    jm = random_jmap(rng, 5, 2)
    curv = curvature(heisenberg_algebra(jm))
    m, k = jm.m, jm.k
    sq = np.einsum("iab,ibc->ac", jm.J, jm.J)
    for a in range(m):
        assert curv.ricci[a, a] == pytest.approx(0.5 * sq[a, a], rel=1e-10, abs=1e-12)
    for i in range(k):
        want = -0.25 * np.trace(jm.J[i] @ jm.J[i])
        assert curv.ricci[m + i, m + i] == pytest.approx(want, rel=1e-10, abs=1e-12)


# ---------------------------------------------------------------------------
# the closed-form connection is an independent route to the same geometry


@pytest.mark.parametrize("m,k,c,sd,identity", [
    (2, 1, 1.0, 0, True),
    (4, 2, 0.7, 1, True),
    (3, 3, 2.3, 2, True),
    (4, 2, 1.3, 3, False),
    (5, 1, 0.4, 4, False),
])
def test_connection_routes_agree(m, k, c, sd, identity):
    rng = np.random.default_rng(100 + sd)
    jm = random_jmap(rng, m, k, identity_grams=identity)
    gamma_koszul = connection(solvable_extension(jm, c))
    gamma_closed = closed_form_connection(jm, c)
    scale = max(1.0, float(np.abs(gamma_closed).max()))
    assert np.abs(gamma_koszul - gamma_closed).max() <= 1e-12 * scale


def test_solvable_sectional_closed_forms():
    rng = np.random.default_rng(43)
    m, k, c = 4, 2, 1.7
    jm = random_jmap(rng, m, k)
    curv = solvable_curvature(jm, c)
    e = m + k  # index of E in the frame
    for a, b in itertools.combinations(range(m), 2):
        w = np.array([jm.J[i][b, a] for i in range(k)])
        want = -0.75 * (w @ w) - c * c / 4
        assert curv.sectional_frame(a, b) == pytest.approx(want, rel=1e-10, abs=1e-12)
    for a in range(m):
        for i in range(k):
            jx = jm.J[i] @ np.eye(m)[a]
            want = -c * c / 2 + 0.25 * (jx @ jx)
            assert curv.sectional_frame(a, m + i) == pytest.approx(want, rel=1e-10, abs=1e-12)
        assert curv.sectional_frame(a, e) == pytest.approx(-c * c / 4, abs=1e-12)
    for i in range(k):
        assert curv.sectional_frame(m + i, e) == pytest.approx(-c * c, abs=1e-12)
    for i, j in itertools.combinations(range(k), 2):
        assert curv.sectional_frame(m + i, m + j) == pytest.approx(-c * c, abs=1e-12)


@seed(19)
@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.3, 3.0))
def test_curvature_identities_hold(s, c):
    rng = np.random.default_rng(s)
    jm = random_jmap(rng, 3, 2, identity_grams=bool(s % 2))
    curv = solvable_curvature(jm, c)
    res = symmetry_residuals(curv.R)
    assert max(res.values()) <= 1e-11


def test_metric_scaling_scales_sectionals():
    rng = np.random.default_rng(44)
    jm = random_jmap(rng, 3, 2)
    alg = solvable_extension(jm, 1.2)
    base = curvature(alg)
    s = 2.5
    scaled = MetricLieAlgebra(n=alg.n, C=alg.C, gram=s * s * alg.gram, labels=alg.labels)
    curv = curvature(scaled)
    assert np.allclose(curv.R, base.R / (s * s), atol=1e-12)


def test_joint_rescaling_degree_two():
    # scaling the operators and c together scales every frame entry of R
    rng = np.random.default_rng(45)
    jm = random_jmap(rng, 4, 2)
    c, s = 0.9, 1.7
    base = solvable_curvature(jm, c)
    jm2 = JMap.create(s * jm.J)
    scaled = solvable_curvature(jm2, s * c)
    assert np.allclose(scaled.R, s * s * base.R, atol=1e-11)


# ---------------------------------------------------------------------------
# derivatives and orbit mean curvature


def test_covariant_derivative_on_v_vectors():
    rng = np.random.default_rng(46)
    jm = random_jmap(rng, 4, 2)
    c = 1.3
    alg = solvable_extension(jm, c)
    curv = curvature(alg)
    n = alg.n
    u = np.zeros(n)
    w = np.zeros(n)
    u[:4] = rng.standard_normal(4)
    w[:4] = rng.standard_normal(4)
    e_vec = np.zeros(n)
    e_vec[-1] = c  # E = cA in original coordinates
    want = 0.5 * alg.bracket(u, w) + 0.5 * c * (u[:4] @ w[:4]) * e_vec
    assert np.allclose(curv.covariant_derivative(u, w), want, atol=1e-12)


def test_covariant_derivative_of_e_directions():
    jm = heis3()
    c = 2.0
    curv = solvable_curvature(jm, c)
    z = np.array([0.0, 0.0, 1.0, 0.0])
    e_vec = np.array([0.0, 0.0, 0.0, c])
    assert np.allclose(curv.covariant_derivative(z, e_vec), -c * z, atol=1e-13)
    assert np.allclose(curv.covariant_derivative(e_vec, z), 0.0, atol=1e-13)
    # nabla_Z Z = c |Z|^2 E
    assert np.allclose(curv.covariant_derivative(z, z), c * e_vec, atol=1e-13)


@pytest.mark.parametrize("m,k,c", [(2, 1, 1.0), (4, 3, 0.8), (3, 2, 2.0)])
def test_mean_curvature_of_central_orbit(m, k, c):
    rng = np.random.default_rng(47)
    jm = random_jmap(rng, m, k)
    curv = solvable_curvature(jm, c)
    n = m + k + 1
    tangent = np.eye(n)[:, m : m + k]
    h = mean_curvature(curv, tangent)
    want = np.zeros(n)
    want[-1] = k * c * c
    assert np.allclose(h, want, atol=1e-12)
    # a sub-block of the center scales with its dimension
    if k > 1:
        h1 = mean_curvature(curv, np.eye(n)[:, m : m + 1])
        want1 = np.zeros(n)
        want1[-1] = c * c
        assert np.allclose(h1, want1, atol=1e-12)


def test_mean_curvature_of_v_orbit_vanishes():
    # v-directions: nabla_X X = (c/2)|X|^2 E is normal, sum is (c m / 2) E;
    # the A-orbit is a geodesic.
    jm = heis3()
    c = 1.5
    curv = solvable_curvature(jm, c)
    a_dir = np.eye(4)[:, 3:]
    assert np.allclose(mean_curvature(curv, a_dir), 0.0, atol=1e-13)
    v_block = np.eye(4)[:, :2]
    h = mean_curvature(curv, v_block)
    want = np.array([0.0, 0.0, 0.0, 2 * 0.5 * c * c])
    assert np.allclose(h, want, atol=1e-12)
