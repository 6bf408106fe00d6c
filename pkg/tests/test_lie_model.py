import json

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_jmap
from solvgeo.lie_model import (
    JMap,
    Lattice,
    ValidationError,
    dump_jmap,
    heisenberg_algebra,
    hyperbolic_algebra,
    jmap_from_dict,
    jmaps_compatible,
    load_jmap,
    quotient_data,
    saturation_completion,
    solvable_extension,
    validate_jmap,
)

J_ROT = np.array([[0.0, -1.0], [1.0, 0.0]])


def heis3():
    return JMap.create(J_ROT[None, :, :])


def test_jmap_create_rejects_nonskew():
    bad = np.array([[[0.0, 1.0], [1.0, 0.0]]])
    with pytest.raises(ValidationError, match="not skew"):
        JMap.create(bad)


def test_jmap_shapes_validated():
    with pytest.raises(ValidationError):
        JMap.create(np.zeros((2, 3)))
    with pytest.raises(ValidationError):
        JMap.create(np.zeros((1, 2, 3)))
    with pytest.raises(ValidationError, match="gram_v"):
        JMap.create(J_ROT[None], gram_v=np.eye(3))


def test_jmap_skew_with_nontrivial_gram():
    # gram_v J skew-symmetric, J itself not
    gram_v = np.diag([1.0, 4.0])
    J = np.linalg.inv(gram_v) @ J_ROT
    jm = JMap.create(J[None], gram_v=gram_v)
    notes = validate_jmap(jm)
    assert any("skew" in s for s in notes)
    # but the raw matrix is rejected under the identity gram
    with pytest.raises(ValidationError):
        JMap.create(J[None])


def test_frame_operators_are_skew():
    rng = np.random.default_rng(5)
    jm = random_jmap(rng, 4, 2, identity_grams=False)
    for jf in jm.frame_operators():
        assert np.allclose(jf, -jf.T, atol=1e-12)


def test_heisenberg_bracket():
    alg = heisenberg_algebra(heis3())
    assert alg.n == 3
    assert alg.labels == ("v", "v", "z")
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    assert np.allclose(alg.bracket(e1, e2), [0.0, 0.0, 1.0], atol=1e-15)
    assert np.allclose(alg.bracket(e2, e1), [0.0, 0.0, -1.0], atol=1e-15)


@seed(23)
@settings(max_examples=25, deadline=None)
@given(
    arrays(np.float64, (4,), elements=st.floats(-3.0, 3.0, allow_nan=False)),
    arrays(np.float64, (4,), elements=st.floats(-3.0, 3.0, allow_nan=False)),
    arrays(np.float64, (2,), elements=st.floats(-3.0, 3.0, allow_nan=False)),
    st.integers(0, 2**31 - 1),
)
def test_bracket_defining_identity(x, y, z, s):
    # <[X,Y], Z>_z == <j(Z)X, Y>_v for the nilpotent algebra, any grams
    rng = np.random.default_rng(s)
    jm = random_jmap(rng, 4, 2, identity_grams=False)
    alg = heisenberg_algebra(jm)
    xx = np.concatenate([x, np.zeros(2)])
    yy = np.concatenate([y, np.zeros(2)])
    lhs = alg.bracket(xx, yy)[4:] @ jm.gram_z @ z
    rhs = (jm.operator(z) @ x) @ jm.gram_v @ y
    scale = max(1.0, abs(lhs), abs(rhs))
    assert abs(lhs - rhs) <= 1e-9 * scale


def test_solvable_extension_layout():
    alg = solvable_extension(heis3(), c=2.0)
    assert alg.n == 4
    assert alg.labels == ("v", "v", "z", "a")
    assert alg.gram[3, 3] == pytest.approx(0.25)
    a, x = np.eye(4)[3], np.eye(4)[0]
    assert np.allclose(alg.bracket(a, x), [0.5, 0.0, 0.0, 0.0])
    z = np.eye(4)[2]
    assert np.allclose(alg.bracket(a, z), [0.0, 0.0, 1.0, 0.0])
    alg.validate()


def test_solvable_extension_rejects_bad_c():
    with pytest.raises(ValidationError):
        solvable_extension(heis3(), c=0.0)
    with pytest.raises(ValidationError):
        solvable_extension(heis3(), c=-1.0)


def test_hyperbolic_algebra_layout():
    alg = hyperbolic_algebra(3, c=1.5)
    assert alg.n == 4
    assert alg.labels == ("v", "v", "v", "a")
    assert alg.gram[3, 3] == pytest.approx(1.0 / 1.5**2)
    alg.validate()


def test_jacobi_validation_catches_bad_constants():
    C = np.zeros((3, 3, 3))
    # [e1,e2]=e3 and [e1,e3]=e1 leave a nonzero cyclic sum
    C[0, 1, 2], C[1, 0, 2] = 1.0, -1.0
    C[0, 2, 0], C[2, 0, 0] = 1.0, -1.0
    from solvgeo.lie_model import MetricLieAlgebra

    alg = MetricLieAlgebra(n=3, C=C, gram=np.eye(3), labels=("v",) * 3)
    with pytest.raises(ValidationError, match="Jacobi"):
        alg.validate()


# ---------------------------------------------------------------------------
# JSON round trips


def test_json_round_trip_exact(tmp_path):
    rng = np.random.default_rng(17)
    jm = random_jmap(rng, 4, 2, identity_grams=False)
    lat = Lattice(basis=np.array([[1.0, 0.5], [0.0, 1.0]]))
    path = tmp_path / "jmap.json"
    dump_jmap(jm, str(path), lattice=lat)
    jm2, lat2 = load_jmap(str(path))
    assert np.array_equal(jm.J, jm2.J)
    assert np.array_equal(jm.gram_v, jm2.gram_v)
    assert np.array_equal(jm.gram_z, jm2.gram_z)
    assert np.array_equal(lat.basis, lat2.basis)


def test_load_rejects_missing_keys(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"m": 2, "k": 1}))
    with pytest.raises(ValidationError, match="'J'"):
        load_jmap(str(path))


def test_load_rejects_shape_mismatch():
    with pytest.raises(ValidationError, match="shape"):
        jmap_from_dict({"m": 2, "k": 2, "J": [J_ROT.tolist()]})


def test_load_rejects_garbage_file(tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("{not json")
    with pytest.raises(ValidationError):
        load_jmap(str(path))


def test_jmaps_compatible():
    jm = heis3()
    other = JMap.create(np.zeros((1, 4, 4)))
    with pytest.raises(ValidationError, match="dimension"):
        jmaps_compatible(jm, other)


# ---------------------------------------------------------------------------
# integer lattice machinery


def test_saturation_completion_basic():
    W, r = saturation_completion(np.array([[2], [4]]))
    assert r == 1
    col = W[:, 0]
    # primitive generator of the saturation of span{(2,4)}
    assert abs(col[0] * 4 - col[1] * 2) == 0
    assert abs(np.gcd(int(col[0]), int(col[1]))) == 1
    det = round(float(np.linalg.det(W.astype(float))))
    assert abs(det) == 1


def test_saturation_completion_full_rank_block():
    gens = np.array([[1, 0], [1, 2], [0, 3]])
    W, r = saturation_completion(gens)
    assert r == 2
    assert abs(round(float(np.linalg.det(W.astype(float))))) == 1
    # saturation contains the generators
    lhs = W[:, :r].astype(float)
    coeff, res, *_ = np.linalg.lstsq(lhs, gens.astype(float), rcond=None)
    assert np.allclose(lhs @ coeff, gens, atol=1e-9)


def test_saturation_rejects_non_integer():
    with pytest.raises(ValidationError, match="integer"):
        saturation_completion(np.array([[0.5], [1.0]]))


def test_quotient_k2_worked_example():
    # two commuting frequencies on R^2, integer lattice, collapse e1 + e2
    J = np.stack([J_ROT, 2.0 * J_ROT])
    jm = JMap.create(J)
    lat = Lattice(basis=np.eye(2))
    q = quotient_data(jm, lat, np.array([[1], [1]]))
    assert q.jmap.k == 1 and q.jmap.m == 2
    rt2 = np.sqrt(2.0)
    assert np.allclose(np.abs(q.zk_frame[:, 0]), [1 / rt2, 1 / rt2], atol=1e-12)
    sgn = np.sign(q.zk_frame[1, 0] - q.zk_frame[0, 0])
    # restricted operator is (J2 - J1)/sqrt(2) up to the frame sign
    assert np.allclose(q.jmap.J[0], sgn * (2.0 - 1.0) / rt2 * J_ROT, atol=1e-12)
    # projected lattice generator has length 1/sqrt(2): it is (e2 - e1)/2
    assert np.allclose(np.abs(q.lattice.basis), [[1 / rt2]], atol=1e-12)
    back = q.zk_frame @ q.lattice.basis
    assert np.allclose(np.abs(back[:, 0]), [0.5, 0.5], atol=1e-12)


def test_quotient_rejects_full_space():
    jm = JMap.create(np.stack([J_ROT, 2.0 * J_ROT]))
    lat = Lattice(basis=np.eye(2))
    with pytest.raises(ValidationError, match="proper"):
        quotient_data(jm, lat, np.eye(2, dtype=int))


def test_quotient_rejects_dependent_generators():
    jm = JMap.create(np.stack([J_ROT, 2.0 * J_ROT]))
    lat = Lattice(basis=np.eye(2))
    with pytest.raises(ValidationError, match="dependent"):
        quotient_data(jm, lat, np.array([[1, 2], [1, 2]]))


def test_quotient_respects_gram_z():
    # with a non-identity gram_z the complement is gram-orthogonal
    rng = np.random.default_rng(3)
    J = np.stack([J_ROT, 2.0 * J_ROT, 0.5 * J_ROT])
    gz = np.array([[2.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 3.0]])
    jm = JMap.create(J, gram_z=gz)
    lat = Lattice(basis=np.eye(3))
    q = quotient_data(jm, lat, np.array([[1], [0], [1]]))
    assert q.jmap.k == 2
    assert np.allclose(q.w_frame.T @ gz @ q.zk_frame, 0.0, atol=1e-12)
    assert np.allclose(q.zk_frame.T @ gz @ q.zk_frame, np.eye(2), atol=1e-12)


def test_lattice_rejects_singular_basis():
    with pytest.raises(ValidationError):
        Lattice(basis=np.array([[1.0, 2.0], [2.0, 4.0]]))
