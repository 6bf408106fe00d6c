"""Curvature of left-invariant metrics from structure constants.

Everything is computed in a gram orthonormal frame.  Conventions:

* c[a, b, l] = <[f_a, f_b], f_l> for the frame f,
* Koszul: <grad_{f_a} f_b, f_l> = (c[a,b,l] + c[l,a,b] + c[l,b,a]) / 2,
* R(x, y) = nabla_x nabla_y - nabla_y nabla_x - nabla_[x,y],
* R[a, b, k, l] = <R(f_a, f_b) f_k, f_l>,
* K(u, v) = <R(u, v)v, u> / (|u|^2 |v|^2 - <u,v>^2),

so hyperbolic space has K < 0 and the round sphere K > 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie_model import JMap, MetricLieAlgebra, solvable_extension
from .linalg import Matrix, ValidationError, frame_from_gram, orthonormalize


def _frame_structure(alg: MetricLieAlgebra) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    T = frame_from_gram(alg.gram)
    Tinv = np.linalg.inv(T)
    Cfr = np.einsum("ia,jb,ijs,ls->abl", T, T, alg.C, Tinv)
    return T, Tinv, Cfr


def connection(alg: MetricLieAlgebra) -> np.ndarray:
    """Levi-Civita coefficients gamma[a, b, l] = <nabla_{f_a} f_b, f_l>."""
    _, _, c = _frame_structure(alg)
    return 0.5 * (c + np.einsum("lab->abl", c) + np.einsum("lba->abl", c))


@dataclass(frozen=True)
class CurvatureData:
    """Connection and curvature of one algebra, all in its orthonormal frame.

    ``frame`` columns are the frame vectors in the original basis;
    ``coframe`` converts original coordinates to frame coordinates.
    """

    alg: MetricLieAlgebra
    frame: np.ndarray      # (n, n)
    coframe: np.ndarray    # (n, n), inverse of frame
    c_frame: np.ndarray    # (n, n, n) structure constants in the frame
    gamma: np.ndarray      # (n, n, n) connection coefficients
    R: np.ndarray          # (n, n, n, n) curvature tensor
    ricci: np.ndarray      # (n, n)
    scalar: float

    @property
    def n(self) -> int:
        return self.alg.n

    def to_frame(self, u: Matrix) -> np.ndarray:
        return self.coframe @ np.asarray(u, dtype=float)

    def covariant_derivative(self, u: Matrix, w: Matrix) -> np.ndarray:
        """nabla_u w for invariant fields, original coordinates in and out."""
        uf = self.to_frame(u)
        wf = self.to_frame(w)
        out = np.einsum("abl,a,b->l", self.gamma, uf, wf)
        return self.frame @ out

    def sectional(self, u: Matrix, w: Matrix) -> float:
        uf = self.to_frame(u)
        wf = self.to_frame(w)
        area2 = (uf @ uf) * (wf @ wf) - (uf @ wf) ** 2
        if area2 <= 1e-14 * max(1.0, float(uf @ uf), float(wf @ wf)) ** 2:
            raise ValidationError("sectional curvature needs linearly independent directions")
        q = np.einsum("abkl,a,b,k,l->", self.R, uf, wf, wf, uf)
        return float(q / area2)

    def sectional_frame(self, i: int, j: int) -> float:
        return float(self.R[i, j, j, i])


def curvature(alg: MetricLieAlgebra) -> CurvatureData:
    T, Tinv, c = _frame_structure(alg)
    gamma = 0.5 * (c + np.einsum("lab->abl", c) + np.einsum("lba->abl", c))
    # N[a] acts on frame coordinates: N[a][l, b] = gamma[a, b, l]
    N = np.einsum("abl->alb", gamma)
    NN = np.einsum("aij,bjk->abik", N, N)
    rop = NN - np.einsum("abik->baik", NN) - np.einsum("abs,sik->abik", c, N)
    R = np.einsum("ablk->abkl", rop)
    ricci = np.einsum("abka->bk", R)
    scalar = float(np.trace(ricci))
    return CurvatureData(
        alg=alg, frame=T, coframe=Tinv, c_frame=c, gamma=gamma,
        R=R, ricci=ricci, scalar=scalar,
    )


def symmetry_residuals(R: np.ndarray) -> dict[str, float]:
    """Max violations of the algebraic curvature identities, for validation."""
    scale = max(1.0, float(np.max(np.abs(R), initial=0.0)))
    front = np.max(np.abs(R + np.einsum("abkl->bakl", R)), initial=0.0)
    back = np.max(np.abs(R + np.einsum("abkl->ablk", R)), initial=0.0)
    pair = np.max(np.abs(R - np.einsum("abkl->klab", R)), initial=0.0)
    bianchi = np.max(
        np.abs(R + np.einsum("abkl->bkal", R) + np.einsum("abkl->kabl", R)), initial=0.0
    )
    return {
        "front_antisymmetry": float(front) / scale,
        "back_antisymmetry": float(back) / scale,
        "pair_symmetry": float(pair) / scale,
        "first_bianchi": float(bianchi) / scale,
    }


def closed_form_connection(j: JMap, c: float) -> np.ndarray:
    """gamma for the solvable extension, from the closed form of the connection.

    Independent of the Koszul route: entries are filled term by term from

        nabla_X Y    = [X, Y]/2 + (c/2) <X, Y> E
        nabla_X Z    = nabla_Z X = -J_Z X / 2
        nabla_Z Z'   = c <Z, Z'> E
        nabla_X E    = -(c/2) X,  nabla_Z E = -c Z,  nabla_E . = 0

    in the orthonormal frame (v-frame, z-frame, E = cA).
    """
    if not c > 0:
        raise ValidationError(f"c must be positive, got {c}")
    m, k = j.m, j.k
    n = m + k + 1
    e = n - 1
    Jf = j.frame_operators()
    gamma = np.zeros((n, n, n))
    for i in range(k):
        zi = m + i
        # <[X, Y], z_i> = <J~_i X, Y>;  (J~_i)[b, a] = <J~_i f_a, f_b>
        gamma[:m, :m, zi] = 0.5 * Jf[i].T
        gamma[:m, zi, :m] = -0.5 * Jf[i].T
        gamma[zi, :m, :m] = -0.5 * Jf[i].T
        gamma[zi, zi, e] = c
        gamma[zi, e, zi] = -c
    for a in range(m):
        gamma[a, a, e] = 0.5 * c
        gamma[a, e, a] = -0.5 * c
    return gamma


def solvable_curvature(j: JMap, c: float) -> CurvatureData:
    return curvature(solvable_extension(j, c))


def mean_curvature(curv: CurvatureData, tangent: Matrix) -> np.ndarray:
    """Mean curvature vector of the orbit tangent to ``tangent`` at identity.

    ``tangent`` holds spanning vectors as columns, original coordinates.
    Returns sum_i (nabla_{t_i} t_i)-perp over an orthonormalized tangent
    frame, in original coordinates.
    """
    t = np.asarray(tangent, dtype=float)
    if t.ndim == 1:
        t = t.reshape(-1, 1)
    tf = curv.coframe @ t
    # orthonormal in frame coordinates == gram orthonormal in original ones
    q = orthonormalize(tf)
    h = np.einsum("abl,ai,bi->l", curv.gamma, q, q)
    h -= q @ (q.T @ h)
    return curv.frame @ h
