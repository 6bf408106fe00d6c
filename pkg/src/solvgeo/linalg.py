"""Small dense linear algebra kernel used by every other module.

Everything here works on plain float64 ``numpy`` arrays.  The symmetric
eigensolver is a cyclic Jacobi iteration rather than a LAPACK call: the
matrices in this package are tiny (dimension 20 or less), the rotation
count is fully deterministic, and downstream verdicts must not depend on
which BLAS happens to be installed.
"""

from __future__ import annotations

import numpy as np

Matrix = np.ndarray

ATOL = 1e-10
RTOL = 1e-9

_JACOBI_SWEEPS = 64


class ValidationError(ValueError):
    """Raised when a matrix or model input fails a structural check."""


def close(x: float, y: float, atol: float = ATOL, rtol: float = RTOL) -> bool:
    """Hybrid comparison |x - y| <= atol + rtol * max(|x|, |y|)."""
    return abs(x - y) <= atol + rtol * max(abs(x), abs(y))


def allclose(a: Matrix, b: Matrix, atol: float = ATOL, rtol: float = RTOL) -> bool:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        return False
    scale = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
    return bool(np.max(np.abs(a - b), initial=0.0) <= atol + rtol * scale)


def check_symmetric(a: Matrix, tol: float = 1e-9) -> None:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"matrix is not square: shape {a.shape}")
    d = np.abs(a - a.T)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if np.max(d, initial=0.0) > tol * scale:
        i, j = np.unravel_index(int(np.argmax(d)), d.shape)
        raise ValidationError(
            f"matrix not symmetric: entry ({i},{j}) differs from ({j},{i}) "
            f"by {d[i, j]:.3e}"
        )


def sym_eigen(a: Matrix, tol: float = 1e-14) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (w, v) with eigenvalues ``w`` ascending and orthonormal
    eigenvectors in the columns of ``v``.  The rotation schedule is fixed,
    so repeated calls on the same input give bitwise identical output.
    """
    check_symmetric(a)
    A = np.array(a, dtype=float)
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V
    scale = max(1.0, float(np.max(np.abs(A))))
    for _ in range(_JACOBI_SWEEPS):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-20 * scale:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    w = A.diagonal().copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    # fix each eigenvector's sign so output is canonical
    for col in range(n):
        lead = np.argmax(np.abs(V[:, col]))
        if V[lead, col] < 0.0:
            V[:, col] = -V[:, col]
    return w, V


def skew_spectrum(a: Matrix, tol: float = 1e-10) -> tuple[np.ndarray, int]:
    """Eigenfrequencies of a skew-symmetric matrix.

    The spectrum of a real skew matrix is {+-i w_1, ..., +-i w_p, 0, ...}.
    Returns (w, zero_dim) with the positive frequencies sorted descending
    and the dimension of the kernel.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    d = np.abs(a + a.T)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if np.max(d, initial=0.0) > 1e-9 * scale:
        i, j = np.unravel_index(int(np.argmax(d)), d.shape)
        raise ValidationError(
            f"matrix not skew-symmetric: entry ({i},{j}) violates by {d[i, j]:.3e}"
        )
    w2, _ = sym_eigen(a.T @ a)
    w2 = np.clip(w2[::-1], 0.0, None)  # descending squares
    # Thresholding happens on the squares: taking square roots first would
    # turn O(eps) rounding noise in a.T a into O(sqrt(eps)) phantom
    # frequencies.  The floor below is the resolution limit of squaring.
    cutoff2 = max((tol * scale) ** 2, 1e-12 * scale * scale)
    # each frequency appears twice in a.T a; consume sorted squares in
    # positional pairs so a cutoff landing inside a rounding-split pair
    # cannot strand one copy
    freqs = []
    i = 0
    while i + 1 < n and w2[i] > cutoff2:
        freqs.append(np.sqrt(0.5 * (w2[i] + w2[i + 1])))
        i += 2
    if i < n and w2[i] > cutoff2:
        raise ValidationError("skew spectrum did not pair up; matrix too ill-conditioned")
    zero_dim = n - 2 * len(freqs)
    return np.array(freqs), zero_dim


def _sv_cutoff2(w2: np.ndarray, tol: float) -> float:
    # cutoff on squared singular values; the second term is the rounding
    # noise floor of forming a.T a, which dominates tol^2 for realistic tol
    top = float(w2[-1]) if w2.size else 0.0
    return max((tol**2) * max(1.0, top), 1e-12 * max(1.0, top))


def rank(a: Matrix, tol: float = 1e-9) -> int:
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0
    w2, _ = sym_eigen(a.T @ a)
    w2 = np.clip(w2, 0.0, None)
    return int(np.sum(w2 > _sv_cutoff2(w2, tol)))


def nullspace(a: Matrix, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel of ``a``."""
    a = np.asarray(a, dtype=float)
    m = a.shape[1]
    w2, v = sym_eigen(a.T @ a)
    w2 = np.clip(w2, 0.0, None)
    keep = w2 <= _sv_cutoff2(w2, tol)
    return v[:, keep].reshape(m, -1)


def orthonormalize(vectors: Matrix, gram: Matrix | None = None, tol: float = 1e-10) -> np.ndarray:
    """Gram-Schmidt the columns of ``vectors`` w.r.t. the ``gram`` inner product.

    Raises ValidationError naming the first dependent column.  With
    gram=None the Euclidean product is used.
    """
    v = np.array(vectors, dtype=float)
    if v.ndim != 2:
        raise ValidationError("orthonormalize expects a 2-d array of column vectors")
    n, m = v.shape
    g = np.eye(n) if gram is None else np.asarray(gram, dtype=float)
    out = np.zeros((n, m))
    for idx in range(m):
        w = v[:, idx].copy()
        for prev in range(idx):
            w -= (out[:, prev] @ g @ w) * out[:, prev]
        # second pass for numerical orthogonality
        for prev in range(idx):
            w -= (out[:, prev] @ g @ w) * out[:, prev]
        norm2 = w @ g @ w
        src_norm2 = max(v[:, idx] @ g @ v[:, idx], 1e-300)
        if norm2 <= (tol * tol) * src_norm2 or norm2 <= 0.0:
            raise ValidationError(f"column {idx} is linearly dependent on earlier columns")
        out[:, idx] = w / np.sqrt(norm2)
    return out


def basis_or_raise(basis: Matrix, name: str, tol: float = 1e-9) -> np.ndarray:
    """Validate that the columns of ``basis`` are independent, reporting offenders."""
    b = np.asarray(basis, dtype=float)
    if b.ndim != 2 or b.shape[1] == 0:
        raise ValidationError(f"{name}: expected a nonempty 2-d column basis")
    try:
        orthonormalize(b, tol=tol)
    except ValidationError as err:
        raise ValidationError(f"{name}: degenerate basis ({err})") from None
    return b


def subspace_intersection_dim(a_basis: Matrix, b_basis: Matrix, tol: float = 1e-9) -> int:
    """dim(span A  intersect  span B) for column bases A, B of the same space."""
    a = basis_or_raise(a_basis, "first basis", tol)
    b = basis_or_raise(b_basis, "second basis", tol)
    if a.shape[0] != b.shape[0]:
        raise ValidationError("bases live in different ambient dimensions")
    stacked = np.hstack([a, b])
    return a.shape[1] + b.shape[1] - rank(stacked, tol)


def frame_from_gram(gram: Matrix, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal frame for an SPD gram matrix.

    Returns T with columns the frame vectors in original coordinates
    (T^T gram T = I).  Gram-Schmidt of the standard basis keeps T lower
    triangular, so block-diagonal grams give block-diagonal frames.
    """
    g = np.asarray(gram, dtype=float)
    check_symmetric(g)
    w, _ = sym_eigen(g)
    if w[0] <= tol:
        raise ValidationError(f"gram matrix not positive definite: min eigenvalue {w[0]:.3e}")
    return orthonormalize(np.eye(g.shape[0]), g)


def spd_or_raise(gram: Matrix, name: str, tol: float = 1e-12) -> np.ndarray:
    g = np.asarray(gram, dtype=float)
    try:
        check_symmetric(g)
    except ValidationError as err:
        raise ValidationError(f"{name}: {err}") from None
    w, _ = sym_eigen(g)
    if w[0] <= tol:
        raise ValidationError(f"{name}: not positive definite (min eigenvalue {w[0]:.3e})")
    return g
