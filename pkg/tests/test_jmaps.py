import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from solvgeo.catalog import QL, QR, ex26_cross, ex26_quat, heis, qab, square_lattice
from solvgeo.jmaps import (
    EquivalenceCertificate,
    build_equivalence_isometry,
    find_equivalence,
    find_lattice_equivalence,
    is_heisenberg_type,
    is_isospectral,
    skew_commutant_dim,
    spectrum_at,
)
from solvgeo.lie_model import JMap, Lattice
from solvgeo.linalg import ValidationError, skew_spectrum

from conftest import random_jmap


def _random_orthogonal(rng, n):
    mat = rng.standard_normal((n, n))
    q, _ = np.linalg.qr(mat)
    return q


def _planted_pair(rng, m, k):
    """j and alpha0 j(beta0 z) alpha0^-1 with known orthogonal maps."""
    j = random_jmap(rng, m, k)
    alpha0 = _random_orthogonal(rng, m)
    beta0 = _random_orthogonal(rng, k)
    jp = np.einsum("ab,ibc,dc->iad", alpha0, np.einsum("li,lab->iab", beta0, j.J), alpha0)
    return j, JMap.create(jp), alpha0, beta0


# ---------------------------------------------------------------------------
# spectra


def test_spectrum_of_rotation_generator():
    j = heis(4)
    assert spectrum_at(j, np.array([1.0])) == ((1.0, 2),)
    assert spectrum_at(j, np.array([-2.0])) == ((2.0, 2),)


def test_spectrum_at_zero_is_all_kernel():
    j = qab(1, 1)
    assert spectrum_at(j, np.zeros(3)) == ((0.0, 8),)


@pytest.mark.parametrize("build", [ex26_cross, ex26_quat])
def test_spectrum_frozen_frequencies(build):
    # frequency sqrt(3/2)*|z| with multiplicity 2, kernel of dimension 2
    j = build()
    spec = spectrum_at(j, np.array([1.0, 0.0, 0.0]))
    assert len(spec) == 2
    (zero, zmult), (omega, mult) = spec
    assert zero == 0.0 and zmult == 2
    assert mult == 2
    norm = np.sqrt(2.0 / 3.0)
    assert abs(omega - np.sqrt(1.5) * norm) < 1e-10


def _magnitudes(spec, m):
    """All m eigenvalue magnitudes: 2 per block, 1 per kernel dimension."""
    out = []
    for w, mult in spec:
        out.extend([w] * (mult if w == 0.0 else 2 * mult))
    assert len(out) == m
    return np.sort(out)


@seed(29)
@settings(max_examples=40, deadline=None)
@given(st.floats(-4.0, 4.0), st.integers(0, 2 ** 32 - 1))
def test_spectrum_scales_linearly(s, key):
    rng = np.random.default_rng(key)
    j = random_jmap(rng, 6, 2)
    z = rng.standard_normal(2)
    freqs = _magnitudes(spectrum_at(j, z), 6)
    freqs_s = _magnitudes(spectrum_at(j, s * z), 6)
    assert np.allclose(np.abs(s) * freqs, freqs_s, atol=1e-10 * max(1.0, abs(s)))


def test_spectrum_rejects_wrong_shape():
    with pytest.raises(ValidationError, match="3-vector"):
        spectrum_at(qab(1, 0), np.array([1.0]))


# ---------------------------------------------------------------------------
# isospectrality


def test_isospectral_reflexive():
    j = qab(2, 0)
    rep = is_isospectral(j, j)
    assert rep.verdict
    assert rep.max_power_checked == 4
    assert rep.worst_residual < 1e-12
    assert rep.witness_z is None


def test_isospectral_quaternion_pair():
    rep = is_isospectral(qab(2, 0), qab(1, 1))
    assert rep.verdict


def test_isospectral_ex26_pair():
    rep = is_isospectral(ex26_cross(), ex26_quat())
    assert rep.verdict


def test_scaling_breaks_isospectrality():
    j = heis(4)
    jp = JMap.create(2.0 * j.J)
    rep = is_isospectral(j, jp)
    assert not rep.verdict
    assert rep.witness_z is not None
    # the witness is an actual spectral discrepancy
    w1, _ = skew_spectrum(j.frame_operators()[0] * rep.witness_z[0])
    w2, _ = skew_spectrum(jp.frame_operators()[0] * rep.witness_z[0])
    assert not np.allclose(w1, w2)


def test_isospectral_dimension_mismatch():
    with pytest.raises(ValidationError, match="mismatch"):
        is_isospectral(qab(1, 0), heis(4))


def _direct_spectra_differ(j, jp, rng, samples=50, tol=1e-8):
    for z in rng.standard_normal((samples, j.k)):
        w1, z1 = skew_spectrum(j.operator(z))
        w2, z2 = skew_spectrum(jp.operator(z))
        if z1 != z2 or not np.allclose(w1, w2, atol=tol * max(1.0, w1.max(initial=0.0))):
            return True
    return False


@seed(31)
@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_grid_method_matches_direct_spectra(key):
    rng = np.random.default_rng(key)
    j = random_jmap(rng, 5, 2)
    perturbed = np.array(j.J)
    perturbed[0] *= 1.1
    jp = JMap.create(perturbed)
    assert is_isospectral(j, j).verdict
    assert not _direct_spectra_differ(j, j, rng)
    assert not is_isospectral(j, jp).verdict
    assert _direct_spectra_differ(j, jp, rng)


def test_isospectral_symmetric_and_transitive_on_catalog():
    trio = [qab(2, 0), qab(1, 1), qab(2, 0)]
    verdicts = {}
    for a in range(3):
        for b in range(3):
            verdicts[a, b] = is_isospectral(trio[a], trio[b]).verdict
    for a in range(3):
        for b in range(3):
            assert verdicts[a, b] == verdicts[b, a]
    for a in range(3):
        for b in range(3):
            for c in range(3):
                if verdicts[a, b] and verdicts[b, c]:
                    assert verdicts[a, c]


# ---------------------------------------------------------------------------
# Heisenberg type and commutant


@pytest.mark.parametrize("a,b", [(1, 0), (2, 0), (1, 1), (2, 1)])
def test_qab_is_heisenberg_type(a, b):
    rep = is_heisenberg_type(qab(a, b))
    assert rep.passed
    assert rep.residual < 1e-12


def test_rotation_generator_is_heisenberg_type():
    assert is_heisenberg_type(heis(2)).passed


def test_quat_padded_map_is_not_heisenberg_type():
    rep = is_heisenberg_type(ex26_quat())
    assert not rep.passed
    assert rep.residual > 0.5


def test_commutant_dim_left_quaternion():
    # right multiplications by i, j, k commute with all left multiplications
    assert skew_commutant_dim(qab(1, 0)) == 3


def test_commutant_dims_separate_the_pair():
    assert skew_commutant_dim(qab(2, 0)) == 10
    assert skew_commutant_dim(qab(1, 1)) == 6


def test_commutant_dim_kernel_block():
    j1 = np.zeros((4, 4))
    j1[0, 1], j1[1, 0] = -1.0, 1.0
    j = JMap.create(np.stack([j1, np.zeros((4, 4))]))
    assert skew_commutant_dim(j) >= 1


@seed(37)
@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_commutant_dim_generic_is_zero(key):
    rng = np.random.default_rng(key)
    assert skew_commutant_dim(random_jmap(rng, 5, 2)) == 0


# ---------------------------------------------------------------------------
# equivalence


def test_self_equivalence_certifies():
    cert = find_equivalence(qab(1, 0), qab(1, 0), restarts=4, seed=0)
    assert cert.status == "certified"
    assert cert.residual < 1e-12


def test_planted_equivalence_recovered():
    rng = np.random.default_rng(5)
    j, jp, _, _ = _planted_pair(rng, 6, 2)
    cert = find_equivalence(j, jp, restarts=60, seed=1)
    assert cert.status == "certified"
    assert cert.residual < 1e-8
    # alpha, beta orthogonal in the certificate invariant sense
    assert np.allclose(cert.alpha.T @ cert.alpha, np.eye(6), atol=1e-10)
    assert np.allclose(cert.beta.T @ cert.beta, np.eye(2), atol=1e-10)


def test_planted_equivalence_k3():
    rng = np.random.default_rng(11)
    j, jp, _, _ = _planted_pair(rng, 4, 3)
    cert = find_equivalence(j, jp, restarts=80, seed=2)
    assert cert.status == "certified"


def test_quaternion_blocks_swap_is_equivalence():
    cert = find_equivalence(qab(2, 1), qab(1, 2), restarts=48, seed=0)
    assert cert.status == "certified"
    assert cert.residual < 1e-8


def test_isospectral_pair_is_obstructed():
    cert = find_equivalence(qab(2, 0), qab(1, 1), restarts=8, seed=0)
    assert cert.status == "obstructed"
    assert cert.obstruction[0] == "skew_commutant_dim"
    assert (cert.obstruction[1], cert.obstruction[2]) == (10, 6)


def test_search_failure_is_inconclusive_not_inequivalent():
    # same invariants by construction, generically inequivalent: conjugate
    # one operator only, leaving the other untouched
    rng = np.random.default_rng(3)
    j = random_jmap(rng, 6, 2)
    q = _random_orthogonal(rng, 6)
    jp = np.stack([q @ j.J[0] @ q.T, j.J[1]])
    try:
        cert = find_equivalence(j, JMap.create(jp), restarts=6, seed=0)
    except ValidationError:
        pytest.skip("random instance degenerate")
    assert cert.status in ("certified", "inconclusive", "obstructed")
    if cert.status == "certified":
        assert cert.residual < 1e-8


def test_equivalence_determinism():
    rng = np.random.default_rng(17)
    j, jp, _, _ = _planted_pair(rng, 6, 2)
    c1 = find_equivalence(j, jp, restarts=40, seed=9)
    c2 = find_equivalence(j, jp, restarts=40, seed=9)
    assert c1.status == c2.status
    assert np.array_equal(c1.alpha, c2.alpha)
    assert np.array_equal(c1.beta, c2.beta)


def test_certified_pairs_are_isospectral():
    pairs = [(qab(2, 1), qab(1, 2)), (qab(1, 0), qab(0, 1))]
    for j, jp in pairs:
        cert = find_equivalence(j, jp, restarts=48, seed=0)
        assert cert.status == "certified"
        assert is_isospectral(j, jp).verdict


# ---------------------------------------------------------------------------
# the isometry itself


def test_identity_certificate_gives_identity_isometry():
    j = qab(1, 1)
    cert = EquivalenceCertificate(
        status="certified", alpha=np.eye(8), beta=np.eye(3), residual=0.0,
    )
    tau = build_equivalence_isometry(j, j, cert, c=1.0)
    assert np.allclose(tau, np.eye(12), atol=1e-14)


def test_planted_certificate_builds_isometry():
    rng = np.random.default_rng(23)
    j, jp, _, _ = _planted_pair(rng, 6, 2)
    cert = find_equivalence(j, jp, restarts=60, seed=4)
    assert cert.status == "certified"
    tau = build_equivalence_isometry(j, jp, cert, c=1.3)
    n = 6 + 2 + 1
    assert tau.shape == (n, n)


def test_block_swap_certificate_builds_isometry():
    j = qab(1, 1)
    swapped = np.zeros((3, 8, 8))
    for axis, unit in enumerate("ijk"):
        swapped[axis, :4, :4] = QR[unit]
        swapped[axis, 4:, 4:] = QL[unit]
    jp = JMap.create(swapped)
    cert = find_equivalence(j, jp, restarts=16, seed=0)
    assert cert.status == "certified"
    tau = build_equivalence_isometry(j, jp, cert, c=0.7)
    assert tau.shape == (12, 12)


def test_isometry_requires_certified_status():
    j = qab(1, 0)
    cert = EquivalenceCertificate(
        status="inconclusive", alpha=np.eye(4), beta=np.eye(3), residual=1.0,
    )
    with pytest.raises(ValidationError, match="certified"):
        build_equivalence_isometry(j, j, cert, c=1.0)


def test_bogus_certificate_fails_verification():
    j = qab(1, 0)
    alpha = np.eye(4)
    alpha[0, 0] = -1.0  # reflection that does not intertwine the operators
    cert = EquivalenceCertificate(
        status="certified", alpha=alpha, beta=np.eye(3), residual=0.0,
    )
    with pytest.raises(ValidationError, match="does not verify"):
        build_equivalence_isometry(j, j, cert, c=1.0)


# ---------------------------------------------------------------------------
# lattice equivalence


def test_lattice_self_equivalence():
    j = heis(4, 1)
    lat = square_lattice(1)
    cert = find_lattice_equivalence(j, lat, j, lat)
    assert cert.status == "certified"


def test_lattice_rotation_planted():
    rng = np.random.default_rng(2)
    j = random_jmap(rng, 4, 2)
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    jp = JMap.create(np.einsum("li,lab->iab", np.linalg.inv(rot), j.J))
    lat = square_lattice(2)
    cert = find_lattice_equivalence(j, lat, jp, lat, restarts=24, seed=0)
    assert cert.status == "certified"
    # beta really maps the lattice onto itself
    coords = np.linalg.solve(lat.basis, cert.beta @ lat.basis)
    assert np.allclose(coords, np.round(coords), atol=1e-8)


def test_square_vs_hexagonal_obstructed():
    j = random_jmap(np.random.default_rng(7), 4, 2)
    square = square_lattice(2)
    hexagonal = Lattice(basis=np.array([[1.0, 0.5], [0.0, np.sqrt(3.0) / 2.0]]))
    cert = find_lattice_equivalence(j, square, j, hexagonal)
    assert cert.status == "obstructed"
    assert cert.obstruction[0] in ("lattice_isometry", "lattice_generator_norms")


def test_lattice_equivalence_k_bound():
    j = random_jmap(np.random.default_rng(1), 4, 4)
    lat = square_lattice(4)
    with pytest.raises(ValidationError, match="k <= 3"):
        find_lattice_equivalence(j, lat, j, lat)
