"""Metric Lie algebra models built from skew-symmetric j-maps.

A j-map is a linear map z -> so(v) between inner product spaces, encoded
as k skew matrices on R^m.  It determines

* a two-step nilpotent algebra on v + z through
  <[X,Y], Z> = <j(Z)X, Y>,
* its rank-one solvable extension on v + z + R A with
  [A, X] = X/2, [A, Z] = Z and |A| = 1/c,
* the degenerate case with trivial j, whose extension carries constant
  sectional curvature -c^2/4.

Bases are ordered v-block, z-block, A.  Inner products are arbitrary SPD
gram matrices per block; all geometry downstream works in gram
orthonormal frames and converts back for I/O.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .linalg import (
    Matrix,
    ValidationError,
    allclose,
    frame_from_gram,
    orthonormalize,
    spd_or_raise,
)

_JACOBI_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class JMap:
    """k skew operators on R^m plus the two gram matrices.

    Immutable after construction; arrays are marked read-only so instances
    can be shared freely.
    """

    m: int
    k: int
    J: np.ndarray           # (k, m, m), J[i] skew w.r.t. gram_v
    gram_v: np.ndarray      # (m, m) SPD
    gram_z: np.ndarray      # (k, k) SPD

    def __post_init__(self):
        object.__setattr__(self, "J", _freeze(np.asarray(self.J, dtype=float)))
        object.__setattr__(self, "gram_v", _freeze(np.asarray(self.gram_v, dtype=float)))
        object.__setattr__(self, "gram_z", _freeze(np.asarray(self.gram_z, dtype=float)))

    @staticmethod
    def create(J, gram_v=None, gram_z=None) -> "JMap":
        J = np.asarray(J, dtype=float)
        if J.ndim != 3:
            raise ValidationError(f"J must have shape (k, m, m), got {J.shape}")
        k, m, m2 = J.shape
        if m != m2:
            raise ValidationError(f"J matrices must be square, got {m}x{m2}")
        gv = np.eye(m) if gram_v is None else np.asarray(gram_v, dtype=float)
        gz = np.eye(k) if gram_z is None else np.asarray(gram_z, dtype=float)
        jm = JMap(m=m, k=k, J=J, gram_v=gv, gram_z=gz)
        validate_jmap(jm)
        return jm

    def v_frame(self) -> np.ndarray:
        return frame_from_gram(self.gram_v)

    def z_frame(self) -> np.ndarray:
        return frame_from_gram(self.gram_z)

    def operator(self, z: Matrix) -> np.ndarray:
        """Matrix of j(z) in the original v coordinates."""
        z = np.asarray(z, dtype=float)
        if z.shape != (self.k,):
            raise ValidationError(f"z must be a {self.k}-vector, got shape {z.shape}")
        return np.einsum("i,iab->ab", z, self.J)

    def frame_operators(self) -> np.ndarray:
        """J~[i] = matrix of j(b_i^z) in the orthonormal v-frame, b^z the z-frame.

        These are genuinely skew-symmetric matrices; all spectral work uses
        them.
        """
        tv = self.v_frame()
        tz = self.z_frame()
        tv_inv = np.linalg.inv(tv)
        conj = np.einsum("ab,ibc,cd->iad", tv_inv, self.J, tv)
        out = np.einsum("li,lab->iab", tz, conj)
        return 0.5 * (out - np.transpose(out, (0, 2, 1)))

    def to_dict(self, lattice: "Lattice | None" = None) -> dict:
        doc = {
            "m": self.m,
            "k": self.k,
            "J": [ji.tolist() for ji in self.J],
            "gram_v": self.gram_v.tolist(),
            "gram_z": self.gram_z.tolist(),
        }
        if lattice is not None:
            doc["lattice"] = lattice.basis.tolist()
        return doc


@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice in z, columns of ``basis`` are the generators."""

    basis: np.ndarray  # (k, k)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValidationError(f"lattice basis must be square, got shape {b.shape}")
        try:
            orthonormalize(b)
        except ValidationError:
            raise ValidationError("lattice basis is rank deficient") from None
        object.__setattr__(self, "basis", _freeze(b))

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    def gram(self, gram_z: Matrix) -> np.ndarray:
        return self.basis.T @ np.asarray(gram_z, dtype=float) @ self.basis


@dataclass(frozen=True)
class MetricLieAlgebra:
    """Structure constants plus an inner product.

    C[i, j] is the coefficient vector of [b_i, b_j] in the same basis.
    ``labels`` tags each basis vector 'v', 'z' or 'a'.
    """

    n: int
    C: np.ndarray          # (n, n, n)
    gram: np.ndarray       # (n, n) SPD
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "C", _freeze(np.asarray(self.C, dtype=float)))
        object.__setattr__(self, "gram", _freeze(np.asarray(self.gram, dtype=float)))
        object.__setattr__(self, "labels", tuple(self.labels))

    def bracket(self, u: Matrix, w: Matrix) -> np.ndarray:
        return np.einsum("ijs,i,j->s", self.C, u, w)

    def inner(self, u: Matrix, w: Matrix) -> float:
        return float(np.asarray(u) @ self.gram @ np.asarray(w))

    def jacobi_residual(self) -> float:
        # ad matrices: ad[i] @ v = [b_i, sum v_s b_s]
        ad = np.einsum("ist->its", self.C)
        term = np.einsum("its,jls->ijlt", ad, self.C)
        jac = term + np.einsum("ijlt->jlit", term) + np.einsum("ijlt->lijt", term)
        return float(np.max(np.abs(jac), initial=0.0))

    def validate(self, tol: float = _JACOBI_TOL) -> None:
        anti = np.max(np.abs(self.C + np.einsum("ijs->jis", self.C)), initial=0.0)
        if anti > tol:
            raise ValidationError(f"structure constants not antisymmetric: residual {anti:.3e}")
        scale = max(1.0, float(np.max(np.abs(self.C), initial=0.0))) ** 2
        res = self.jacobi_residual()
        if res > tol * scale:
            raise ValidationError(f"Jacobi identity violated: residual {res:.3e}")
        spd_or_raise(self.gram, "gram")


def validate_jmap(j: JMap, lattice: Lattice | None = None, tol: float = 1e-10) -> list[str]:
    """Structural checks; raises ValidationError naming the worst offender.

    Returns a list of human-readable facts about the input (used by the
    CLI validate verb).
    """
    if j.J.shape != (j.k, j.m, j.m):
        raise ValidationError(f"J shape {j.J.shape} does not match (k={j.k}, m={j.m})")
    gv = spd_or_raise(j.gram_v, "gram_v")
    gz = spd_or_raise(j.gram_z, "gram_z")
    if gv.shape != (j.m, j.m):
        raise ValidationError(f"gram_v shape {gv.shape} does not match m={j.m}")
    if gz.shape != (j.k, j.k):
        raise ValidationError(f"gram_z shape {gz.shape} does not match k={j.k}")
    scale = max(1.0, float(np.max(np.abs(j.J), initial=0.0)))
    for i in range(j.k):
        # skew w.r.t. gram_v means (gram J)^T = -gram J
        gj = gv @ j.J[i]
        d = np.abs(gj + gj.T)
        worst = float(np.max(d, initial=0.0))
        if worst > tol * scale:
            a, b = np.unravel_index(int(np.argmax(d)), d.shape)
            raise ValidationError(
                f"J[{i}] not skew w.r.t. gram_v: max asymmetry {worst:.3e} at entry ({a},{b})"
            )
    notes = [f"m={j.m}, k={j.k}", "all J skew w.r.t. gram_v", "gram_v and gram_z positive definite"]
    if lattice is not None:
        if lattice.k != j.k:
            raise ValidationError(f"lattice rank {lattice.k} does not match k={j.k}")
        notes.append("lattice basis full rank")
    return notes


# ---------------------------------------------------------------------------
# builders


def _bracket_z_coords(j: JMap) -> np.ndarray:
    """W[a, b] = z-coordinates of [e_a, e_b] for the standard v basis.

    Solves gram_z w = (<j(f_i) e_a, e_b>_v)_i per pair, which is the
    defining identity <[X,Y], Z> = <j(Z)X, Y> written in coordinates.
    """
    # rhs[i, a, b] = (J_i e_a)^T gram_v e_b = (J_i^T gram_v)[a, b]
    rhs = np.einsum("ica,cb->iab", j.J, j.gram_v)
    gz_inv = np.linalg.inv(j.gram_z)
    return np.einsum("li,iab->abl", gz_inv, rhs)


def heisenberg_algebra(j: JMap) -> MetricLieAlgebra:
    """Two-step nilpotent algebra on v + z defined by the j-map."""
    n = j.m + j.k
    C = np.zeros((n, n, n))
    W = _bracket_z_coords(j)
    C[: j.m, : j.m, j.m:] = W
    gram = np.zeros((n, n))
    gram[: j.m, : j.m] = j.gram_v
    gram[j.m:, j.m:] = j.gram_z
    alg = MetricLieAlgebra(n=n, C=C, gram=gram, labels=("v",) * j.m + ("z",) * j.k)
    alg.validate()
    return alg


def solvable_extension(j: JMap, c: float) -> MetricLieAlgebra:
    """Rank-one solvable extension on v + z + R A with |A| = 1/c."""
    if not c > 0:
        raise ValidationError(f"c must be positive, got {c}")
    m, k = j.m, j.k
    n = m + k + 1
    a = n - 1
    C = np.zeros((n, n, n))
    C[:m, :m, m : m + k] = _bracket_z_coords(j)
    for x in range(m):
        C[a, x, x] = 0.5
        C[x, a, x] = -0.5
    for z in range(m, m + k):
        C[a, z, z] = 1.0
        C[z, a, z] = -1.0
    gram = np.zeros((n, n))
    gram[:m, :m] = j.gram_v
    gram[m : m + k, m : m + k] = j.gram_z
    gram[a, a] = 1.0 / (c * c)
    alg = MetricLieAlgebra(n=n, C=C, gram=gram, labels=("v",) * m + ("z",) * k + ("a",))
    alg.validate()
    return alg


def hyperbolic_algebra(m: int, c: float) -> MetricLieAlgebra:
    """Degenerate extension v + R A (no center); curvature is -c^2/4."""
    if m < 1:
        raise ValidationError("need at least one v direction")
    if not c > 0:
        raise ValidationError(f"c must be positive, got {c}")
    n = m + 1
    C = np.zeros((n, n, n))
    for x in range(m):
        C[m, x, x] = 0.5
        C[x, m, x] = -0.5
    gram = np.eye(n)
    gram[m, m] = 1.0 / (c * c)
    alg = MetricLieAlgebra(n=n, C=C, gram=gram, labels=("v",) * m + ("a",))
    alg.validate()
    return alg


# ---------------------------------------------------------------------------
# exact integer helpers for lattice quotients


def _snf_row_transform(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Diagonalize an integer matrix by unimodular row and column operations.

    Returns (U, D, rank) with U (k x k, det +-1) the accumulated row
    transform and D = U @ mat @ (column ops).  Python ints keep this exact.
    """
    D = [row[:] for row in mat]
    k = len(D)
    d = len(D[0]) if k else 0
    U = [[1 if i == j else 0 for j in range(k)] for i in range(k)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def add_row(i, j, q):  # row_i += q * row_j
        D[i] = [a + q * b for a, b in zip(D[i], D[j])]
        U[i] = [a + q * b for a, b in zip(U[i], U[j])]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]

    def add_col(i, j, q):  # col_i += q * col_j
        for row in D:
            row[i] += q * row[j]

    r = 0
    while r < min(k, d):
        # find a pivot in the remaining block
        piv = None
        best = None
        for i in range(r, k):
            for jj in range(r, d):
                if D[i][jj] != 0 and (best is None or abs(D[i][jj]) < best):
                    best = abs(D[i][jj])
                    piv = (i, jj)
        if piv is None:
            break
        swap_rows(r, piv[0])
        swap_cols(r, piv[1])
        while True:
            dirty = False
            for i in range(r + 1, k):
                if D[i][r] != 0:
                    q = -(D[i][r] // D[r][r])
                    add_row(i, r, q)
                    if D[i][r] != 0:
                        swap_rows(i, r)
                    dirty = True
            for jj in range(r + 1, d):
                if D[r][jj] != 0:
                    q = -(D[r][jj] // D[r][r])
                    add_col(jj, r, q)
                    if D[r][jj] != 0:
                        swap_cols(jj, r)
                    dirty = True
            if not dirty:
                break
        r += 1
    return U, D, r


def _int_det(mat: list[list[int]]) -> int:
    k = len(mat)
    if k == 0:
        return 1
    if k == 1:
        return mat[0][0]
    det = 0
    for j in range(k):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        det += (-1) ** j * mat[0][j] * _int_det(minor)
    return det


def saturation_completion(gens: np.ndarray) -> tuple[np.ndarray, int]:
    """Z-basis of R^k whose first r columns span the saturation of ``gens``.

    gens is a (k, d) integer matrix whose columns span a rank-r sublattice.
    The result W is unimodular; columns r..k-1 complete the saturated
    sublattice to a basis of Z^k.
    """
    g = np.asarray(gens)
    if not np.all(g == np.round(g)):
        raise ValidationError("subspace generators must be integer vectors in lattice coordinates")
    gi = [[int(x) for x in row] for row in np.round(g).astype(np.int64)]
    U, _, r = _snf_row_transform(gi)
    # gens columns live in span of the first r columns of U^{-1}
    k = len(U)
    uinv = _int_inverse(U)
    W = np.array([[uinv[i][j] for j in range(k)] for i in range(k)], dtype=np.int64)
    if abs(_int_det([list(map(int, row)) for row in W])) != 1:
        raise ValidationError("internal error: completion matrix not unimodular")
    return W, r


def _int_inverse(mat: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix via Fraction elimination."""
    k = len(mat)
    a = [[Fraction(mat[i][j]) for j in range(k)] + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for col in range(k):
        piv = next(i for i in range(col, k) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(k):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = [[a[i][k + j] for j in range(k)] for i in range(k)]
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise ValidationError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


@dataclass(frozen=True)
class QuotientData:
    """Quotient of the z torus by a rational subtorus.

    ``jmap`` is the restriction of j to the orthogonal complement z_K,
    expressed in an orthonormal basis of z_K (so gram_z of the quotient is
    the identity).  ``projection`` maps original z coordinates to those
    orthonormal coordinates; ``lattice`` is the projected lattice in them.
    """

    jmap: JMap
    lattice: Lattice
    projection: np.ndarray   # (k_K, k)
    w_frame: np.ndarray      # (k, d) orthonormal basis of w w.r.t. gram_z
    zk_frame: np.ndarray     # (k, k_K)


def quotient_data(j: JMap, lattice: Lattice, w_gens: Matrix) -> QuotientData:
    """Restrict (j, lattice) to the gram_z-orthogonal complement of w.

    ``w_gens`` holds integer coefficient vectors w.r.t. the lattice basis
    (columns).  The subspace they span must be proper and nontrivial.
    """
    gens = np.asarray(w_gens)
    if gens.ndim == 1:
        gens = gens.reshape(-1, 1)
    if gens.shape[0] != j.k:
        raise ValidationError(f"w generators must have {j.k} rows, got {gens.shape[0]}")
    W, r = saturation_completion(gens)
    d = gens.shape[1]
    if r != d:
        raise ValidationError("w generators are linearly dependent")
    if not 0 < d < j.k:
        raise ValidationError(f"need a proper nontrivial subspace, got dim {d} of {j.k}")
    b = lattice.basis
    w_vecs = b @ W[:, :d].astype(float)         # spans w, lattice vectors
    rest = b @ W[:, d:].astype(float)           # complete the lattice basis
    # orthonormalize w first, then seed the complement with the completed
    # basis directions; both w.r.t. gram_z
    full = orthonormalize(np.hstack([w_vecs, rest]), j.gram_z)
    w_frame = full[:, :d]
    zk_frame = full[:, d:]
    k_k = j.k - d
    jk = np.einsum("li,lab->iab", zk_frame, j.J)
    # express operators in the original v coordinates; gram_v unchanged
    j_quot = JMap.create(jk, gram_v=j.gram_v, gram_z=np.eye(k_k))
    proj = zk_frame.T @ j.gram_z                # row i = <., zk_i>_gram_z
    lat_basis = proj @ rest                     # projections of the completed basis
    lat = Lattice(basis=lat_basis)
    return QuotientData(jmap=j_quot, lattice=lat, projection=proj, w_frame=w_frame, zk_frame=zk_frame)


# ---------------------------------------------------------------------------
# JSON schema


def jmap_from_dict(doc: dict) -> tuple[JMap, Lattice | None]:
    for key in ("m", "k", "J"):
        if key not in doc:
            raise ValidationError(f"missing required key '{key}'")
    m = int(doc["m"])
    k = int(doc["k"])
    J = np.asarray(doc["J"], dtype=float)
    if J.shape != (k, m, m):
        raise ValidationError(f"J has shape {J.shape}, expected ({k}, {m}, {m})")
    gram_v = np.asarray(doc.get("gram_v", np.eye(m)), dtype=float)
    gram_z = np.asarray(doc.get("gram_z", np.eye(k)), dtype=float)
    j = JMap.create(J, gram_v=gram_v, gram_z=gram_z)
    lattice = None
    if "lattice" in doc and doc["lattice"] is not None:
        lattice = Lattice(basis=np.asarray(doc["lattice"], dtype=float))
        if lattice.k != k:
            raise ValidationError(f"lattice rank {lattice.k} does not match k={k}")
    return j, lattice


def load_jmap(path: str) -> tuple[JMap, Lattice | None]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ValidationError(f"cannot read j-map file {path}: {err}") from None
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: top level must be an object")
    return jmap_from_dict(doc)


def dump_jmap(j: JMap, path: str, lattice: Lattice | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(j.to_dict(lattice), fh, indent=1)
        fh.write("\n")


def jmaps_compatible(j1: JMap, j2: JMap, tol: float = 1e-10) -> None:
    """Same v and z dimensions and the same z inner product."""
    if j1.m != j2.m or j1.k != j2.k:
        raise ValidationError(
            f"dimension mismatch: (m={j1.m}, k={j1.k}) vs (m={j2.m}, k={j2.k})"
        )
    if not allclose(j1.gram_z, j2.gram_z, atol=tol):
        raise ValidationError("gram_z differs between the two j-maps")
