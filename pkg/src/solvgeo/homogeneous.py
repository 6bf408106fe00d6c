"""Einstein verdicts, sphere-bundle scalar curvature, and flat-plane witnesses.

Three questions about the homogeneous spaces built from a j-map live here.

* Is the solvable metric (at the critical scaling c = 1) Einstein?  The
  answer is decided by two finite-dimensional residuals: the trace
  pairing -(1/m) tr(j(Z)j(W)) must reproduce the z inner product, and
  Sum_i j(Z_i)^2 must be scalar.  Both are cross-checked downstream
  against the eigenvalue spread of the actual Ricci tensor.

* What is the scalar curvature of the cylinder {|X| = r} x z inside the
  two-step nilpotent group?  Computed through the Gauss equation from
  the ambient curvature and the cylinder's shape operator; at r = 1 a
  closed form in tr-invariants of j is exposed and kept in agreement.

* Does a commuting pair X, Y with overlapping j-orbits certify a flat
  2-plane?  damek_witness checks the two conditions and then actually
  produces the plane: it mixes X and Y with the z-directions that map
  one onto the other and maximizes the sectional curvature along that
  one-parameter family, reporting the attained zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import CurvatureData, curvature, solvable_curvature
from .lie_model import JMap, heisenberg_algebra
from .linalg import ValidationError, nullspace, subspace_intersection_dim, sym_eigen

__all__ = [
    "DamekReport",
    "EinsteinReport",
    "constant_scalar_verdict",
    "damek_witness",
    "einstein_check",
    "nil_sphere_scalar",
    "nil_sphere_scalar_closed",
    "nil_sphere_samples",
]


# ---------------------------------------------------------------------------
# Einstein conditions at c = 1


@dataclass(frozen=True)
class EinsteinReport:
    """Residuals of the two Einstein conditions for the c = 1 metric.

    condition (i): <Z, W> = -(1/m) tr(j(Z) j(W)) on an orthonormal basis.
    condition (ii): Sum_i j(Z_i)^2 is a scalar operator.
    ``scalar_coefficient`` is the best-fit scalar for condition (ii);
    ``ricci_eigen_spread`` is the independent cross-check (max - min
    Ricci eigenvalue of the c = 1 metric, which vanishes iff Einstein).
    """

    condition_i_residual: float
    condition_ii_residual: float
    condition_i_passed: bool
    condition_ii_passed: bool
    passed: bool
    scalar_coefficient: float
    ricci_eigen_spread: float
    tol: float


def einstein_check(j: JMap, tol: float = 1e-9) -> EinsteinReport:
    jf = j.frame_operators()
    m = j.m
    pair = np.einsum("iab,lba->il", jf, jf)          # tr(j~_i j~_l)
    res_i = float(np.max(np.abs(np.eye(j.k) + pair / m)))
    s2 = np.einsum("iab,ibc->ac", jf, jf)            # Sum_i j~_i^2, symmetric
    coeff = float(np.trace(s2)) / m
    dev_eigs, _ = sym_eigen(s2 - coeff * np.eye(m))
    res_ii = float(np.max(np.abs(dev_eigs)))
    ric_eigs, _ = sym_eigen(solvable_curvature(j, 1.0).ricci)
    return EinsteinReport(
        condition_i_residual=res_i,
        condition_ii_residual=res_ii,
        condition_i_passed=res_i < tol,
        condition_ii_passed=res_ii < tol,
        passed=res_i < tol and res_ii < tol,
        scalar_coefficient=coeff,
        ricci_eigen_spread=float(ric_eigs[-1] - ric_eigs[0]),
        tol=tol,
    )


def constant_scalar_verdict(j: JMap, tol: float = 1e-9) -> bool:
    """Whether the sphere-bundle scalar curvature is direction-independent.

    Equivalent to condition (ii) alone: the only x-dependent term of the
    closed form below is the quadratic form of Sum_i j(Z_i)^2.
    """
    return einstein_check(j, tol=tol).condition_ii_passed


# ---------------------------------------------------------------------------
# scalar curvature of {|X| = r} x z in the nilpotent group


def _sphere_gauss_pieces(j: JMap) -> tuple[CurvatureData, np.ndarray]:
    return curvature(heisenberg_algebra(j)), j.frame_operators()


def _sphere_scalar_from_pieces(
    curv: CurvatureData, jf: np.ndarray, m: int, k: int, r: float, xhat: np.ndarray
) -> float:
    comp = nullspace(xhat.reshape(1, m))             # (m, m-1), basis of xhat-perp
    # shape operator in the tangent frame {Y_a} + {z_i}: diagonal 1/r on
    # the sphere block, the bracket/orbit couplings off-diagonal
    b = np.zeros((m + k - 1, m + k - 1))
    b[: m - 1, : m - 1] = np.eye(m - 1) / r
    for i in range(k):
        col = -0.5 * comp.T @ (jf[i] @ xhat)
        b[m - 1 + i, : m - 1] = col
        b[: m - 1, m - 1 + i] = col
    nf = np.zeros(m + k)
    nf[:m] = xhat
    ric_nn = float(nf @ curv.ricci @ nf)
    return float(curv.scalar - 2.0 * ric_nn + np.trace(b) ** 2 - np.trace(b @ b))


def _unit_frame_direction(j: JMap, x, r: float, tol: float) -> np.ndarray:
    xf = np.linalg.solve(j.v_frame(), np.asarray(x, dtype=float))
    nrm = float(np.sqrt(xf @ xf))
    if abs(nrm - r) > tol * max(1.0, r):
        raise ValidationError(f"point has norm {nrm:.12g}, expected the radius {r}")
    return xf / nrm


def nil_sphere_scalar(j: JMap, r: float, x, tol: float = 1e-9) -> float:
    """Scalar curvature of the radius-r cylinder at the point x (|x| = r).

    ``x`` is given in original v coordinates and must lie on the sphere
    w.r.t. gram_v.  Assembled through the Gauss equation; valid for any
    positive radius.
    """
    if not r > 0:
        raise ValidationError(f"radius must be positive, got {r}")
    xhat = _unit_frame_direction(j, x, r, tol)
    curv, jf = _sphere_gauss_pieces(j)
    return _sphere_scalar_from_pieces(curv, jf, j.m, j.k, r, xhat)


def nil_sphere_scalar_closed(j: JMap, x, tol: float = 1e-9) -> float:
    """Closed form at r = 1: tau + (m-1)(m-2) - (1/2) <Sum j~_i^2 x, x>.

    ``tau`` is the ambient nilpotent scalar curvature.  Kept in exact
    agreement with the Gauss route; the quadratic-form term is the only
    part that can depend on the direction x.
    """
    xhat = _unit_frame_direction(j, x, 1.0, tol)
    jf = j.frame_operators()
    tau = curvature(heisenberg_algebra(j)).scalar
    s2 = np.einsum("iab,ibc->ac", jf, jf)
    return float(tau + (j.m - 1) * (j.m - 2) - 0.5 * (xhat @ s2 @ xhat))


def nil_sphere_samples(j: JMap, r: float = 1.0, samples: int = 100, seed: int = 0) -> np.ndarray:
    """Scalar curvature at ``samples`` seeded directions on the sphere."""
    if not r > 0:
        raise ValidationError(f"radius must be positive, got {r}")
    if samples < 1:
        raise ValidationError("need at least one sample")
    curv, jf = _sphere_gauss_pieces(j)
    rng = np.random.default_rng(seed)
    out = np.empty(samples)
    for p in range(samples):
        xhat = rng.standard_normal(j.m)
        xhat /= np.sqrt(xhat @ xhat)
        out[p] = _sphere_scalar_from_pieces(curv, jf, j.m, j.k, r, xhat)
    return out


# ---------------------------------------------------------------------------
# flat-plane witness from a commuting pair with overlapping orbits


@dataclass(frozen=True)
class DamekReport:
    """Outcome of the flat-plane certificate for a pair (X, Y) in v.

    ``condition_holds`` is the conjunction of [X, Y] = 0 and a common
    vector in the two j-orbits.  ``span_curvature`` is the sectional
    curvature of span{X, Y} itself in the c = 1 solvable metric (it is
    -1/4 for orthonormal commuting pairs, never the flat plane).  When
    the condition holds, ``flat_u``/``flat_v`` span the constructed
    plane of curvature ``flat_curvature`` and ``mix`` is the z-fraction
    of the mixing family at the optimum.
    """

    bracket_norm: float
    intersection_dim: int
    condition_holds: bool
    span_curvature: float
    flat_curvature: float | None
    flat_u: np.ndarray | None
    flat_v: np.ndarray | None
    mix: float | None
    status: str


def _orbit_basis(jf: np.ndarray, xf: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    cols = []
    for op in jf:
        w = op @ xf
        for c in cols:
            w = w - (c @ w) * c
        nrm = np.sqrt(w @ w)
        if nrm > tol:
            cols.append(w / nrm)
    if not cols:
        return np.zeros((xf.size, 0))
    return np.stack(cols, axis=1)


def _embed(j: JMap, vf, zf) -> np.ndarray:
    out = np.zeros(j.m + j.k + 1)
    out[: j.m] = j.v_frame() @ vf
    out[j.m: j.m + j.k] = j.z_frame() @ zf
    return out


def _family_curvature(curv, j, xf, yf, zf, zpf, s: float) -> float:
    u = _embed(j, np.sqrt(1.0 - s) * xf, np.sqrt(s) * zf)
    v = _embed(j, np.sqrt(1.0 - s) * yf, np.sqrt(s) * zpf)
    return curv.sectional(u, v)


def damek_witness(j: JMap, X, Y, tol: float = 1e-10) -> DamekReport:
    """Certify a flat 2-plane from a commuting pair with meeting orbits.

    The returned plane is NOT span{X, Y}: mixing the pair with the
    z-directions that realize the common orbit vector is what reaches
    curvature zero.  Both sign branches of the second z-direction are
    searched, since only one of them closes the curvature gap.
    """
    tv = j.v_frame()
    xf = np.linalg.solve(tv, np.asarray(X, dtype=float))
    yf = np.linalg.solve(tv, np.asarray(Y, dtype=float))
    nx, ny = np.sqrt(xf @ xf), np.sqrt(yf @ yf)
    if nx < 1e-12 or ny < 1e-12:
        raise ValidationError("X and Y must be nonzero")
    if abs(xf @ yf) > (1.0 - 1e-10) * nx * ny:
        raise ValidationError("X and Y must be linearly independent")
    xf, yf = xf / nx, yf / ny

    jf = j.frame_operators()
    bracket = np.einsum("iab,b,a->i", jf, xf, yf)
    bracket_norm = float(np.sqrt(bracket @ bracket))
    ox = _orbit_basis(jf, xf)
    oy = _orbit_basis(jf, yf)
    if ox.shape[1] and oy.shape[1]:
        inter_dim = subspace_intersection_dim(ox, oy)
    else:
        inter_dim = 0
    holds = bracket_norm < tol and inter_dim >= 1

    curv = solvable_curvature(j, 1.0)
    span_k = curv.sectional(_embed(j, xf, np.zeros(j.k)), _embed(j, yf, np.zeros(j.k)))

    if not holds:
        return DamekReport(
            bracket_norm=bracket_norm, intersection_dim=inter_dim,
            condition_holds=False, span_curvature=span_k,
            flat_curvature=None, flat_u=None, flat_v=None, mix=None,
            status="condition_failed",
        )

    # pick a unit vector in the orbit intersection and the z-directions
    # that map X and Y onto it
    coeffs = nullspace(np.hstack([ox, -oy]).T @ np.hstack([ox, -oy]))
    w = ox @ coeffs[: ox.shape[1], 0]
    w /= np.sqrt(w @ w)
    mx = np.stack([op @ xf for op in jf], axis=1)    # (m, k)
    my = np.stack([op @ yf for op in jf], axis=1)
    zeta = np.linalg.lstsq(mx, w, rcond=None)[0]
    zeta /= np.sqrt(zeta @ zeta)
    zeta_p = np.linalg.lstsq(my, w, rcond=None)[0]
    zeta_p /= np.sqrt(zeta_p @ zeta_p)

    best = (-np.inf, None, None)
    grid = np.linspace(0.02, 0.98, 49)
    for zp in (zeta_p, -zeta_p):
        vals = [_family_curvature(curv, j, xf, yf, zeta, zp, s) for s in grid]
        b = int(np.argmax(vals))
        lo = grid[max(b - 1, 0)]
        hi = grid[min(b + 1, len(grid) - 1)]
        # golden-section refinement of the 1-d family maximum
        phi = (np.sqrt(5.0) - 1.0) / 2.0
        a_, b_ = lo, hi
        c_ = b_ - phi * (b_ - a_)
        d_ = a_ + phi * (b_ - a_)
        fc = _family_curvature(curv, j, xf, yf, zeta, zp, c_)
        fd = _family_curvature(curv, j, xf, yf, zeta, zp, d_)
        for _ in range(60):
            if fc > fd:
                b_, d_, fd = d_, c_, fc
                c_ = b_ - phi * (b_ - a_)
                fc = _family_curvature(curv, j, xf, yf, zeta, zp, c_)
            else:
                a_, c_, fc = c_, d_, fd
                d_ = a_ + phi * (b_ - a_)
                fd = _family_curvature(curv, j, xf, yf, zeta, zp, d_)
        s_star = 0.5 * (a_ + b_)
        k_star = _family_curvature(curv, j, xf, yf, zeta, zp, s_star)
        if k_star > best[0]:
            best = (k_star, s_star, zp)

    k_star, s_star, zp = best
    u = _embed(j, np.sqrt(1.0 - s_star) * xf, np.sqrt(s_star) * zeta)
    v = _embed(j, np.sqrt(1.0 - s_star) * yf, np.sqrt(s_star) * zp)
    status = "flat_plane" if abs(k_star) <= tol else "no_flat_plane_on_family"
    return DamekReport(
        bracket_norm=bracket_norm, intersection_dim=inter_dim,
        condition_holds=True, span_curvature=span_k,
        flat_curvature=float(k_star), flat_u=u, flat_v=v, mix=float(s_star),
        status=status,
    )
