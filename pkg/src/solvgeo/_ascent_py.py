"""Pure numpy twin of the plane-ascent kernel.

Maximizes Q(u, v) = R[i,j,k,l] u_i v_j v_k u_l over orthonormal pairs
(u, v) by projected gradient ascent with a backtracking line search.
All restarts advance together behind an active mask; each carries its
own step size.  The compiled kernel in _ascent.pyx implements the same
iteration with the same constants, so either backend can serve.

Contract shared by both backends:

* starts are orthonormalized before the first evaluation,
* tangent projection: for U = [u, v], G = [gu, gv] the update direction
  is G - U sym(U^T G),
* Armijo acceptance f' >= f + c1 step |grad|^2 with c1 = 1e-4,
* step *= 1.3 capped at 4.0 on accept, *= 0.5 on reject, dead below
  1e-14,
* a restart stops when |grad|^2 <= gtol^2 or its line search dies,
* re-orthonormalization drops a degenerate v in favour of the standard
  basis vector with the smallest |u| component (first on ties).
"""

from __future__ import annotations

import numpy as np

C1 = 1e-4
STEP0 = 0.5
STEP_GROWTH = 1.3
STEP_MAX = 4.0
MIN_STEP = 1e-14


def orth_pairs(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise orthonormalization of (u, v) pairs, deterministic in ties."""
    U = np.array(U, dtype=float)
    V = np.array(V, dtype=float)
    nu = np.sqrt(np.einsum("ri,ri->r", U, U))
    bad_u = nu < 1e-12
    if bad_u.any():
        U[bad_u] = 0.0
        U[bad_u, 0] = 1.0
        nu[bad_u] = 1.0
    U /= nu[:, None]
    V -= np.einsum("ri,ri->r", U, V)[:, None] * U
    nv = np.sqrt(np.einsum("ri,ri->r", V, V))
    bad_v = np.where(nv < 1e-12)[0]
    for r in bad_v:
        j = int(np.argmin(np.abs(U[r])))
        V[r] = 0.0
        V[r, j] = 1.0
        V[r] -= (U[r] @ V[r]) * U[r]
        nv[r] = np.sqrt(V[r] @ V[r])
    V /= nv[:, None]
    return U, V


def plane_values(R: np.ndarray, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    Mv = np.einsum("ijkl,rj,rk->ril", R, V, V)
    return np.einsum("ril,ri,rl->r", Mv, U, U)


def _grads(R, U, V):
    Mv = np.einsum("ijkl,rj,rk->ril", R, V, V)
    q = np.einsum("ril,ri,rl->r", Mv, U, U)
    gu = np.einsum("ril,rl->ri", Mv, U) + np.einsum("ril,ri->rl", Mv, U)
    Nu = np.einsum("ijkl,ri,rl->rjk", R, U, U)
    gv = np.einsum("rjk,rk->rj", Nu, V) + np.einsum("rjk,rj->rk", Nu, V)
    return q, gu, gv


def ascend(
    R: np.ndarray,
    starts_u: np.ndarray,
    starts_v: np.ndarray,
    max_iter: int = 500,
    gtol: float = 1e-12,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run every restart to convergence; returns (values, us, vs)."""
    R = np.ascontiguousarray(R, dtype=float)
    U, V = orth_pairs(starts_u, starts_v)
    nres = U.shape[0]
    step = np.full(nres, STEP0)
    f = plane_values(R, U, V)
    active = np.ones(nres, dtype=bool)
    gtol2 = gtol * gtol
    for _ in range(max_iter):
        if not active.any():
            break
        _, gu, gv = _grads(R, U, V)
        a = np.einsum("ri,ri->r", U, gu)
        d = np.einsum("ri,ri->r", V, gv)
        bc = 0.5 * (np.einsum("ri,ri->r", U, gv) + np.einsum("ri,ri->r", V, gu))
        tu = gu - a[:, None] * U - bc[:, None] * V
        tv = gv - d[:, None] * V - bc[:, None] * U
        gn2 = np.einsum("ri,ri->r", tu, tu) + np.einsum("ri,ri->r", tv, tv)
        active &= gn2 > gtol2
        trying = active.copy()
        accepted = np.zeros(nres, dtype=bool)
        while trying.any():
            idx = np.where(trying)[0]
            cu = U[idx] + step[idx, None] * tu[idx]
            cv = V[idx] + step[idx, None] * tv[idx]
            pu, pv = orth_pairs(cu, cv)
            fc = plane_values(R, pu, pv)
            ok = fc >= f[idx] + C1 * step[idx] * gn2[idx]
            acc = idx[ok]
            U[acc] = pu[ok]
            V[acc] = pv[ok]
            f[acc] = fc[ok]
            accepted[acc] = True
            trying[acc] = False
            rej = idx[~ok]
            step[rej] *= 0.5
            trying[rej[step[rej] < MIN_STEP]] = False
        step[accepted] = np.minimum(step[accepted] * STEP_GROWTH, STEP_MAX)
        active &= accepted
    return f, U, V
