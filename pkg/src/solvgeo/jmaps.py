"""Spectral and equivalence predicates on families of skew maps.

Two j-maps are *isospectral* when j(z) and j'(z) have the same eigenvalue
multiset for every z, and *equivalent* when a pair of orthogonal maps
(alpha, beta) conjugates one family onto the other:

    alpha j(z) alpha^-1 = j'(beta z)  for all z.

Equivalence is decided constructively (a certificate carrying alpha and
beta) or refuted by a named invariant; a failed search alone never claims
inequivalence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie_model import JMap, Lattice, jmaps_compatible, solvable_extension
from .linalg import ValidationError, frame_from_gram, rank, skew_spectrum, sym_eigen

__all__ = [
    "EquivalenceCertificate",
    "HeisenbergTypeReport",
    "IsospectralityReport",
    "build_equivalence_isometry",
    "find_equivalence",
    "find_lattice_equivalence",
    "is_heisenberg_type",
    "is_isospectral",
    "skew_commutant_dim",
    "spectrum_at",
]

_GRID_LIMIT = 500_000
_CERT_TOL = 1e-8


# ---------------------------------------------------------------------------
# spectra


def spectrum_at(j: JMap, z, group_rtol: float = 1e-8) -> tuple[tuple[float, int], ...]:
    """Frequency multiset of j(z): pairs (omega, multiplicity), ascending.

    Eigenvalues of the skew operator come in pairs +-i*omega; the returned
    multiplicity counts blocks, so (omega, 2) means each of +-i*omega is a
    double eigenvalue.  A kernel shows up as (0.0, dim).
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (j.k,):
        raise ValidationError(f"z must be a {j.k}-vector, got shape {z.shape}")
    zeta = np.linalg.solve(j.z_frame(), z)
    # evaluate at the unit vector and scale back: keeps the zero/nonzero
    # split independent of |z| and makes homogeneity exact
    norm = float(np.linalg.norm(zeta))
    if norm == 0.0:
        return ((0.0, j.m),)
    op = np.einsum("i,iab->ab", zeta / norm, j.frame_operators())
    freqs, zero_dim = skew_spectrum(op)
    freqs = np.sort(freqs)
    out: list[tuple[float, int]] = []
    if zero_dim:
        out.append((0.0, zero_dim))
    i = 0
    gap = group_rtol * max(1.0, float(freqs[-1]) if freqs.size else 1.0)
    while i < freqs.size:
        run = i + 1
        while run < freqs.size and freqs[run] - freqs[run - 1] <= gap:
            run += 1
        out.append((float(np.mean(freqs[i:run])) * norm, run - i))
        i = run
    return tuple(out)


@dataclass(frozen=True)
class IsospectralityReport:
    verdict: bool
    max_power_checked: int
    worst_residual: float
    tolerance: float
    witness_z: np.ndarray | None  # original z coordinates, None when verdict holds


def _stack_traces(js: np.ndarray, coeffs: np.ndarray, p: int) -> np.ndarray:
    """tr(j(z)^(2p)) for each coefficient row, batched."""
    op = np.einsum("nk,kab->nab", coeffs, js)
    sq = op @ op
    acc = sq
    for _ in range(p - 1):
        acc = acc @ sq
    return np.trace(acc, axis1=1, axis2=2)


def is_isospectral(j: JMap, jp: JMap, tol: float = 1e-8) -> IsospectralityReport:
    """Decide whether j(z) and j'(z) are isospectral for every z.

    tr(j(z)^(2p)) is a homogeneous degree-2p polynomial in z; for skew
    operators the even trace powers p = 1..floor(m/2) determine the
    frequency multiset.  Two polynomials of degree 2p agree everywhere
    iff they agree on the product grid {0..2p}^k, so the check is exact
    up to floating point.
    """
    jmaps_compatible(j, jp)
    js, jps = j.frame_operators(), jp.frame_operators()
    zf = j.z_frame()
    p_max = max(j.m // 2, 1)
    worst = 0.0
    witness = None
    verdict = True
    for p in range(1, p_max + 1):
        npts = (2 * p + 1) ** j.k
        if npts > _GRID_LIMIT:
            raise ValidationError(
                f"trace grid for power {2 * p} has {npts} points (limit {_GRID_LIMIT})"
            )
        grid = np.indices((2 * p + 1,) * j.k).reshape(j.k, -1).T.astype(float)
        t1 = _stack_traces(js, grid, p)
        t2 = _stack_traces(jps, grid, p)
        diff = np.abs(t1 - t2)
        scale = np.maximum(1.0, np.maximum(np.abs(t1), np.abs(t2)))
        bad = diff > tol * scale
        worst = max(worst, float(diff.max()))
        if verdict and bad.any():
            verdict = False
            witness = zf @ grid[int(np.argmax(np.where(bad, diff, -1.0)))]
    return IsospectralityReport(
        verdict=verdict,
        max_power_checked=p_max,
        worst_residual=worst,
        tolerance=tol,
        witness_z=witness,
    )


@dataclass(frozen=True)
class HeisenbergTypeReport:
    passed: bool
    residual: float
    worst_pair: tuple[int, int]


def is_heisenberg_type(j: JMap, tol: float = 1e-9) -> HeisenbergTypeReport:
    """Check the polarized identity J_i J_l + J_l J_i = -2 delta_il Id."""
    js = j.frame_operators()
    eye = np.eye(j.m)
    worst, pair = 0.0, (0, 0)
    for i in range(j.k):
        for l in range(i, j.k):
            res = js[i] @ js[l] + js[l] @ js[i]
            if i == l:
                res = res + 2.0 * eye
            dev = float(np.max(np.abs(res)))
            if dev > worst:
                worst, pair = dev, (i, l)
    return HeisenbergTypeReport(passed=worst <= tol, residual=worst, worst_pair=pair)


def skew_commutant_dim(j: JMap) -> int:
    """dim of the skew maps commuting with every J_i (0 means a finite
    commutant group, the genericity hypothesis of the torus argument)."""
    js = j.frame_operators()
    m = j.m
    idx = [(a, b) for a in range(m) for b in range(a + 1, m)]
    cols = []
    for a, b in idx:
        s = np.zeros((m, m))
        s[a, b], s[b, a] = 1.0, -1.0
        cols.append(np.concatenate([(s @ ji - ji @ s).ravel() for ji in js]))
    system = np.array(cols).T
    return len(idx) - rank(system)


# ---------------------------------------------------------------------------
# equivalence search


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Outcome of an equivalence search.

    status is one of "certified", "obstructed", "inconclusive".  For a
    certified pair, alpha and beta are the orthogonal maps (original
    coordinates) with alpha j(z) alpha^-1 = j'(beta z); the residual is the
    summed squared Frobenius deviation of that identity over a z-frame.
    Obstructions carry (invariant_name, value_first, value_second).
    """

    status: str
    alpha: np.ndarray | None
    beta: np.ndarray | None
    residual: float
    obstruction: tuple | None = None
    restarts_used: int = 0


def _sorted_eigs(mat: np.ndarray) -> np.ndarray:
    w, _ = sym_eigen(mat)
    return w


def _invariant_obstruction(j: JMap, jp: JMap, js, jps, tol: float = 1e-8):
    d1, d2 = skew_commutant_dim(j), skew_commutant_dim(jp)
    if d1 != d2:
        return ("skew_commutant_dim", d1, d2)
    s1 = _sorted_eigs(sum(ji @ ji for ji in js))
    s2 = _sorted_eigs(sum(ji @ ji for ji in jps))
    scale = max(1.0, float(np.max(np.abs(s1))), float(np.max(np.abs(s2))))
    if np.max(np.abs(s1 - s2)) > tol * scale:
        return ("sum_square_spectrum", s1, s2)
    g1 = _sorted_eigs(np.einsum("iab,lba->il", js, js))
    g2 = _sorted_eigs(np.einsum("iab,lba->il", jps, jps))
    scale = max(1.0, float(np.max(np.abs(g1))), float(np.max(np.abs(g2))))
    if np.max(np.abs(g1 - g2)) > tol * scale:
        return ("trace_gram_spectrum", g1, g2)
    return None


def _cayley(s: np.ndarray) -> np.ndarray:
    n = s.shape[0]
    return np.linalg.solve(np.eye(n) - 0.5 * s, np.eye(n) + 0.5 * s)


def _polar(mat: np.ndarray) -> np.ndarray:
    # Newton iteration X <- (X + X^-T)/2 converges to the orthogonal factor
    x = np.array(mat, dtype=float)
    n = x.shape[0]
    if abs(np.linalg.det(x)) < 1e-12:
        x = x + 1e-6 * np.eye(n)
    for _ in range(30):
        y = 0.5 * (x + np.linalg.inv(x).T)
        if np.max(np.abs(y - x)) < 1e-15:
            x = y
            break
        x = y
    return x


def _targets(jps: np.ndarray, bmat: np.ndarray) -> np.ndarray:
    """T_i = j'(B e_i) as frame matrices."""
    return np.einsum("li,lab->iab", bmat, jps)


def _residual(js, jps, amat, bmat) -> float:
    m = np.einsum("ab,ibc,dc->iad", amat, js, amat) - _targets(jps, bmat)
    return float(np.sum(m * m))


def _alpha_relaxation(js, jps, bmat, rng) -> np.ndarray:
    """Orthogonal start for alpha given beta.

    alpha J_i = T_i alpha is linear in alpha; the best unit-Frobenius
    solution is the bottom eigenvector of the stacked normal matrix,
    recovered by a few shifted inverse-power steps and pushed back to the
    orthogonal group by polar projection.
    """
    m = js.shape[1]
    eye = np.eye(m)
    targets = _targets(jps, bmat)
    h = np.zeros((m * m, m * m))
    for ji, ti in zip(js, targets):
        k = np.kron(eye, ji.T) - np.kron(ti, eye)
        h += k.T @ k
    shift = max(np.trace(h) / (m * m), 1.0) * 1e-9
    h += shift * np.eye(m * m)
    x = rng.standard_normal(m * m)
    x /= np.linalg.norm(x)
    for _ in range(8):
        x = np.linalg.solve(h, x)
        x /= np.linalg.norm(x)
    return _polar(x.reshape(m, m))


def _beta_refit(js, jps, amat) -> np.ndarray:
    """Best orthogonal beta for a fixed alpha (linear fit + polar)."""
    k = js.shape[0]
    conj = np.einsum("ab,ibc,dc->iad", amat, js, amat)
    gram = np.einsum("iab,lab->il", jps, jps)
    rhs = np.einsum("lab,iab->li", jps, conj)
    sol = np.linalg.solve(gram + 1e-12 * np.eye(k), rhs)
    return _polar(sol)


def _descend(js, jps, amat, bmat, fix_beta: bool, max_iter: int = 250,
             gtol: float = 1e-13) -> tuple[np.ndarray, np.ndarray, float]:
    """Joint orthogonal descent on the conjugation residual.

    Riemannian gradient steps with a Cayley retraction and backtracking;
    quartic objective, so plain first-order descent with a growing step is
    enough once the starts are good.
    """
    step = 0.5
    targets = _targets(jps, bmat)
    mres = np.einsum("ab,ibc,dc->iad", amat, js, amat) - targets
    f = float(np.sum(mres * mres))
    for _ in range(max_iter):
        ga = -4.0 * np.einsum("iab,bc,icd->ad", mres, amat, js)
        wa = 0.5 * (ga @ amat.T - amat @ ga.T)
        gn2 = float(np.sum(wa * wa))
        if not fix_beta:
            gb = 2.0 * np.einsum("iab,lab->li", mres, jps)
            wb = 0.5 * (gb @ bmat.T - bmat @ gb.T)
            gn2 += float(np.sum(wb * wb))
        if gn2 <= gtol * gtol or f <= 1e-24:
            break
        improved = False
        while step > 1e-14:
            a_try = _cayley(-step * wa) @ amat
            if fix_beta:
                b_try = bmat
            else:
                b_try = _cayley(-step * wb) @ bmat
            t_try = _targets(jps, b_try)
            m_try = np.einsum("ab,ibc,dc->iad", a_try, js, a_try) - t_try
            f_try = float(np.sum(m_try * m_try))
            if f_try <= f - 1e-4 * step * gn2:
                amat, bmat, mres, f = a_try, b_try, m_try, f_try
                step = min(step * 1.3, 4.0)
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    return amat, bmat, f


def _signed_permutations(k: int):
    from itertools import permutations, product

    for perm in permutations(range(k)):
        for signs in product((1.0, -1.0), repeat=k):
            mat = np.zeros((k, k))
            for col, (row, sg) in enumerate(zip(perm, signs)):
                mat[row, col] = sg
            yield mat


def _gram_matched_starts(js: np.ndarray, jps: np.ndarray):
    """Beta candidates read off the quadratic form z -> tr(j(z)^2).

    Any solution conjugates one form onto the other, so when the form has
    simple spectrum beta must map eigenvector to eigenvector and the true
    beta is one of the 2^k sign choices below.  Repeated eigenvalues just
    make the list non-exhaustive; every entry is still orthogonal.
    """
    from itertools import product

    gram = np.einsum("iab,lba->il", js, js)
    gramp = np.einsum("iab,lba->il", jps, jps)
    _, vecs = sym_eigen(gram)
    _, vecsp = sym_eigen(gramp)
    k = gram.shape[0]
    for signs in product((1.0, -1.0), repeat=k):
        yield vecsp @ (np.asarray(signs)[:, None] * vecs.T)


def _random_orthogonal(n: int, rng) -> np.ndarray:
    mat = rng.standard_normal((n, n))
    q = np.zeros((n, n))
    for i in range(n):
        w = mat[:, i].copy()
        for p in range(i):
            w -= (q[:, p] @ w) * q[:, p]
        w /= max(np.linalg.norm(w), 1e-300)
        q[:, i] = w
    return q


def find_equivalence(j: JMap, jp: JMap, restarts: int = 200, seed: int = 0) -> EquivalenceCertificate:
    """Search for orthogonal (alpha, beta) with alpha j(z) alpha^-1 = j'(beta z).

    Cheap invariants run first and turn a mismatch into an obstruction.
    The search itself alternates a linear relaxation for alpha (exact for
    planted pairs) with joint Riemannian descent; failure to converge
    yields "inconclusive", never a claim of inequivalence.
    """
    jmaps_compatible(j, jp)
    js, jps = j.frame_operators(), jp.frame_operators()
    obstruction = _invariant_obstruction(j, jp, js, jps)
    if obstruction is not None:
        return EquivalenceCertificate(
            status="obstructed", alpha=None, beta=None,
            residual=float("inf"), obstruction=obstruction,
        )

    best_a, best_b, best_f = None, None, float("inf")
    used = 0
    structured = list(_gram_matched_starts(js, jps))
    structured.extend(_signed_permutations(j.k))
    for r in range(max(restarts, 1)):
        rng = np.random.default_rng([seed, r])
        if r < len(structured):
            bmat = structured[r]
        else:
            bmat = _random_orthogonal(j.k, rng)
        amat = _alpha_relaxation(js, jps, bmat, rng)
        for round_ in range(3):
            amat, bmat, f = _descend(js, jps, amat, bmat, fix_beta=False)
            if f < 1e-20 or round_ == 2:
                break
            bmat = _beta_refit(js, jps, amat)
            amat = _alpha_relaxation(js, jps, bmat, rng)
        used = r + 1
        if f < best_f:
            best_a, best_b, best_f = amat, bmat, f
        if best_f < 1e-18:
            break

    return _package_certificate(j, jp, best_a, best_b, best_f, used)


def _package_certificate(j, jp, amat, bmat, f, used) -> EquivalenceCertificate:
    tv, tz = j.v_frame(), j.z_frame()
    tvp, tzp = jp.v_frame(), jp.z_frame()
    alpha = tvp @ amat @ np.linalg.inv(tv)
    beta = tzp @ bmat @ np.linalg.inv(tz)
    status = "certified" if f < _CERT_TOL else "inconclusive"
    return EquivalenceCertificate(
        status=status, alpha=alpha, beta=beta, residual=f, restarts_used=used,
    )


def _lattice_vectors_of_norm(gram: np.ndarray, target: float, tol: float) -> list[np.ndarray]:
    k = gram.shape[0]
    ginv = np.linalg.inv(gram)
    bounds = [int(np.floor(np.sqrt(max(target, 0.0) * ginv[i, i] + 1e-9))) + 1 for i in range(k)]
    total = 1
    for b in bounds:
        total *= 2 * b + 1
    if total > _GRID_LIMIT:
        raise ValidationError(f"lattice enumeration needs {total} points (limit {_GRID_LIMIT})")
    out = []
    grid = np.indices(tuple(2 * b + 1 for b in bounds)).reshape(k, -1).T
    grid = grid - np.array(bounds)
    norms = np.einsum("ni,il,nl->n", grid, gram, grid)
    for row in grid[np.abs(norms - target) <= tol]:
        out.append(row.astype(float))
    return out


def find_lattice_equivalence(j: JMap, lat: Lattice, jp: JMap, latp: Lattice,
                             restarts: int = 50, seed: int = 0) -> EquivalenceCertificate:
    """Equivalence search with beta constrained to map one lattice onto the other.

    The admissible betas form a finite set (k <= 3): each must send a
    generator tuple of the first lattice to vectors matching the second
    lattice's gram exactly, with a unimodular change of generators.  Each
    candidate beta then gets the alpha-only search.
    """
    jmaps_compatible(j, jp)
    if j.k > 3:
        raise ValidationError("lattice equivalence enumeration supports k <= 3 only")
    pre = _invariant_obstruction(j, jp, j.frame_operators(), jp.frame_operators())
    if pre is not None:
        return EquivalenceCertificate(
            status="obstructed", alpha=None, beta=None,
            residual=float("inf"), obstruction=pre,
        )
    gz = j.gram_z
    basis, basisp = lat.basis, latp.basis
    gram = basis.T @ gz @ basis
    gramp = basisp.T @ gz @ basisp
    scale = max(1.0, float(np.max(np.abs(gramp))))
    tol = 1e-9 * scale

    candidate_sets = [_lattice_vectors_of_norm(gram, gramp[i, i], tol) for i in range(j.k)]
    if any(len(c) == 0 for c in candidate_sets):
        return EquivalenceCertificate(
            status="obstructed", alpha=None, beta=None, residual=float("inf"),
            obstruction=("lattice_generator_norms", np.diag(gram), np.diag(gramp)),
        )

    betas: list[np.ndarray] = []

    def extend(rows: list[np.ndarray]):
        i = len(rows)
        if i == j.k:
            nmat = np.array(rows).T  # columns: coords of preimages in lat basis
            if abs(abs(float(np.linalg.det(nmat))) - 1.0) > 1e-9:
                return
            vmat = basis @ nmat
            betas.append(basisp @ np.linalg.inv(vmat))
            return
        for cand in candidate_sets[i]:
            ok = True
            for p, prev in enumerate(rows):
                if abs(prev @ gram @ cand - gramp[p, i]) > tol:
                    ok = False
                    break
            if ok:
                extend(rows + [cand])

    extend([])
    if not betas:
        return EquivalenceCertificate(
            status="obstructed", alpha=None, beta=None, residual=float("inf"),
            obstruction=("lattice_isometry", gram, gramp),
        )

    js, jps = j.frame_operators(), jp.frame_operators()
    tz, tzp = j.z_frame(), jp.z_frame()
    best = None
    per_beta = max(restarts // len(betas), 3)
    for bi, beta in enumerate(betas):
        bmat = np.linalg.solve(tzp, beta @ tz)  # frame coordinates
        bmat = _polar(bmat)
        for r in range(per_beta):
            rng = np.random.default_rng([seed, bi, r])
            amat = _alpha_relaxation(js, jps, bmat, rng)
            amat, _, f = _descend(js, jps, amat, bmat, fix_beta=True)
            if best is None or f < best[2]:
                best = (amat, bmat, f)
            if f < 1e-18:
                break
        if best is not None and best[2] < 1e-18:
            break

    amat, bmat, f = best
    cert = _package_certificate(j, jp, amat, bmat, f, len(betas))
    return cert


def build_equivalence_isometry(j: JMap, jp: JMap, cert: EquivalenceCertificate,
                               c: float, tol: float = 1e-9) -> np.ndarray:
    """Assemble and verify the isometry tau(sA + X + Z) = sA + alpha X + beta Z.

    Returns the (m+k+1)-square matrix of tau on the solvable extension,
    checked to preserve both the bracket and the inner product.
    """
    if cert.status != "certified":
        raise ValidationError(f"certificate status is '{cert.status}', need 'certified'")
    m, k = j.m, j.k
    n = m + k + 1
    tau = np.zeros((n, n))
    tau[:m, :m] = cert.alpha
    tau[m:m + k, m:m + k] = cert.beta
    tau[n - 1, n - 1] = 1.0

    g1 = solvable_extension(j, c)
    g2 = solvable_extension(jp, c)
    gram_res = float(np.max(np.abs(tau.T @ g2.gram @ tau - g1.gram)))
    scale = max(1.0, float(np.max(np.abs(g1.C))))
    bracket_res = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            lhs = tau @ g1.C[a, b]
            rhs = g2.bracket(tau[:, a], tau[:, b])
            bracket_res = max(bracket_res, float(np.max(np.abs(lhs - rhs))))
    if gram_res > tol * scale or bracket_res > tol * scale:
        raise ValidationError(
            f"certificate does not verify: gram residual {gram_res:.3e}, "
            f"bracket residual {bracket_res:.3e}"
        )
    return tau
