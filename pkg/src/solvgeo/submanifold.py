"""Hypersurfaces {|X| = r} x z x (t-axis) inside the solvable group.

The hypersurface through (t, X) with |X| = r is tangent to the sphere
directions of v, all of z, and the scaling axis.  Its shape operator has
a closed form in the invariant frame:

    B(Y) = (sqrt(t)/r) Y + [Y, x^]/2      for Y tangent to the sphere,
    B(Z) = -j(Z) x^ / 2                   for Z in z,
    B(E) = 0                              on the unit scaling axis,

with x^ = X/r the outward unit normal.  The parameter c never enters B;
everything c-dependent arrives through the ambient curvature in the
Gauss equation.  A transport oracle (finite differences of the normal
field along invariant flows, corrected by the connection) keeps the
closed form honest.

Curvature of the hypersurface is assembled from the Gauss equation:
sectional through ``sub_sectional`` / ``gauss_tensor``, scalar through
``sub_scalar`` whose three ingredients (ambient scalar, Ric(n, n), the
B trace terms) are exposed separately because only the last one feels
the coordinate t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import closed_form_connection, solvable_curvature
from .lie_model import JMap
from .linalg import ValidationError, nullspace

__all__ = [
    "SubmanifoldPoint",
    "WeingartenData",
    "gauss_tensor",
    "profile_csv",
    "scalar_profile",
    "sub_scalar",
    "sub_scalar_parts",
    "sub_sectional",
    "tangent_frame",
    "unit_normal",
    "weingarten",
    "weingarten_transport",
]


@dataclass(frozen=True)
class SubmanifoldPoint:
    """Point (t, x_dir, r): base coordinate, fiber direction, radius.

    ``x_dir`` is the unit direction X/r in original v coordinates; the
    gram_v normalization is enforced by the functions that receive a
    j-map alongside the point.
    """

    t: float
    x_dir: np.ndarray
    r: float

    def __post_init__(self):
        object.__setattr__(self, "x_dir", np.asarray(self.x_dir, dtype=float))
        if not (np.isfinite(self.t) and self.t > 0):
            raise ValidationError(f"t must be positive, got {self.t}")
        if not (np.isfinite(self.r) and self.r > 0):
            raise ValidationError(f"r must be positive, got {self.r}")
        if self.x_dir.ndim != 1 or not np.all(np.isfinite(self.x_dir)):
            raise ValidationError("x_dir must be a finite vector")


def _frame_direction(j: JMap, p: SubmanifoldPoint, tol: float = 1e-9) -> np.ndarray:
    if p.x_dir.shape != (j.m,):
        raise ValidationError(f"x_dir must be a {j.m}-vector, got shape {p.x_dir.shape}")
    xf = np.linalg.solve(j.v_frame(), p.x_dir)
    nrm = float(np.sqrt(xf @ xf))
    if abs(nrm - 1.0) > tol:
        raise ValidationError(f"x_dir must be a unit vector, gram norm {nrm:.12g}")
    return xf / nrm


def tangent_frame(j: JMap, p: SubmanifoldPoint) -> np.ndarray:
    """Orthonormal tangent frame as columns, in ambient frame coordinates.

    Ordering is deterministic: m-1 sphere directions (an orthonormal
    complement of x^ in v), the k z-directions, the unit scaling axis.
    """
    xf = _frame_direction(j, p)
    n = j.m + j.k + 1
    F = np.zeros((n, j.m + j.k))
    F[: j.m, : j.m - 1] = nullspace(xf.reshape(1, j.m))
    F[j.m : j.m + j.k, j.m - 1 : j.m + j.k - 1] = np.eye(j.k)
    F[n - 1, j.m + j.k - 1] = 1.0
    return F


def unit_normal(j: JMap, p: SubmanifoldPoint) -> np.ndarray:
    """Outward unit normal in ambient frame coordinates (zero A-part)."""
    nf = np.zeros(j.m + j.k + 1)
    nf[: j.m] = _frame_direction(j, p)
    return nf


@dataclass(frozen=True)
class WeingartenData:
    """Shape operator in the orthonormal tangent frame.

    ``B[q, s]`` pairs tangent columns q, s of ``frame``; the labels name
    each column's block.  B is exactly symmetric and its construction
    never consults c.
    """

    B: np.ndarray
    frame: np.ndarray
    labels: tuple[str, ...]
    point: SubmanifoldPoint


def weingarten(j: JMap, p: SubmanifoldPoint) -> WeingartenData:
    xf = _frame_direction(j, p)
    F = tangent_frame(j, p)
    jf = j.frame_operators()
    m, k = j.m, j.k
    d = m + k
    B = np.zeros((d, d))
    B[: m - 1, : m - 1] = (np.sqrt(p.t) / p.r) * np.eye(m - 1)
    Y = F[:m, : m - 1]
    for i in range(k):
        coup = 0.5 * ((jf[i] @ Y).T @ xf)            # <j~_i Y_a, x^> / 2
        B[m - 1 + i, : m - 1] = coup
        B[: m - 1, m - 1 + i] = coup
    labels = ("sphere",) * (m - 1) + ("z",) * k + ("axis",)
    return WeingartenData(B=B, frame=F, labels=labels, point=p)


def weingarten_transport(j: JMap, c: float, p: SubmanifoldPoint, h: float = 1e-3) -> np.ndarray:
    """Shape operator recomputed as covariant transport of the normal.

    For each tangent direction U, B(U) = dn/ds + gamma(U, n): the
    coordinate rate of the normal field along the invariant flow of U
    (five-point stencil) plus the connection correction.  Moving along
    a sphere direction at unit invariant speed changes the X coordinate
    at rate sqrt(t); z and axis flows leave X alone.  The result must
    match the closed form for every c.
    """
    xf = _frame_direction(j, p)
    F = tangent_frame(j, p)
    gamma = closed_form_connection(j, c)
    m, k = j.m, j.k
    nf = np.zeros(m + k + 1)
    nf[:m] = xf
    d = m + k
    B = np.zeros((d, d))
    X0 = p.r * xf
    rate = np.sqrt(p.t)
    h = h * p.r / rate          # uniform step in the normalized arc parameter
    for q in range(d):
        u = F[:, q]
        cov = np.einsum("abl,a,b->l", gamma, u, nf)
        if q < m - 1:
            yf = F[:m, q]

            def normal_at(s):
                xs = X0 + s * rate * yf
                return xs / np.sqrt(xs @ xs)

            fd = (
                -normal_at(2 * h) + 8 * normal_at(h) - 8 * normal_at(-h) + normal_at(-2 * h)
            ) / (12 * h)
            cov = cov.copy()
            cov[:m] += fd
        B[:, q] = F.T @ cov
    return B


# ---------------------------------------------------------------------------
# Gauss-equation curvature


def _tangent_coords(F: np.ndarray, u, name: str, tol: float = 1e-8) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (F.shape[0],):
        raise ValidationError(f"{name} must be an ambient frame vector of length {F.shape[0]}")
    a = F.T @ u
    resid = u - F @ a
    nrm = np.sqrt(u @ u)
    if nrm < 1e-13:
        raise ValidationError(f"{name} must be nonzero")
    if np.sqrt(resid @ resid) > tol * nrm:
        raise ValidationError(f"{name} is not tangent to the hypersurface")
    return a


def sub_sectional(j: JMap, c: float, p: SubmanifoldPoint, u, v) -> float:
    """Sectional curvature of the hypersurface plane span{u, v}.

    u, v are ambient frame vectors tangent at p.  Gauss equation: the
    ambient value plus <Bu,u><Bv,v> - <Bu,v>^2, scaled by the area
    element.
    """
    curv = solvable_curvature(j, c)
    wd = weingarten(j, p)
    au = _tangent_coords(wd.frame, u, "u")
    av = _tangent_coords(wd.frame, v, "v")
    area2 = (au @ au) * (av @ av) - (au @ av) ** 2
    if area2 <= 1e-14 * max(1.0, float(au @ au), float(av @ av)) ** 2:
        raise ValidationError("sectional curvature needs linearly independent directions")
    uf = wd.frame @ au
    vf = wd.frame @ av
    amb = np.einsum("abkl,a,b,k,l->", curv.R, uf, vf, vf, uf)
    bu, bv = wd.B @ au, wd.B @ av
    corr = (au @ bu) * (av @ bv) - (au @ bv) ** 2
    return float((amb + corr) / area2)


def gauss_tensor(j: JMap, c: float, p: SubmanifoldPoint) -> tuple[np.ndarray, np.ndarray]:
    """Full curvature tensor of the hypersurface on its tangent frame.

    Returns (G, frame) with G[a,b,k,l] indexed by tangent columns, so
    G[a,b,b,a] is the sectional curvature of a frame pair.  Used by the
    plane searches, which treat it exactly like an ambient tensor.
    """
    curv = solvable_curvature(j, c)
    wd = weingarten(j, p)
    F, B = wd.frame, wd.B
    Rt = np.einsum("ABKL,Aa,Bb,Kk,Ll->abkl", curv.R, F, F, F, F, optimize=True)
    G = Rt + np.einsum("al,bk->abkl", B, B) - np.einsum("ak,bl->abkl", B, B)
    return G, F


def sub_scalar_parts(j: JMap, c: float, p: SubmanifoldPoint) -> tuple[float, float, float]:
    """(ambient scalar, Ric(n, n), (tr B)^2 - tr(B^2)) at the point.

    The first two never feel t; the trace term carries the whole
    t-dependence of the hypersurface scalar curvature.
    """
    curv = solvable_curvature(j, c)
    nf = unit_normal(j, p)
    ric_nn = float(nf @ curv.ricci @ nf)
    B = weingarten(j, p).B
    btrace = float(np.trace(B) ** 2 - np.trace(B @ B))
    return float(curv.scalar), ric_nn, btrace


def sub_scalar(j: JMap, c: float, p: SubmanifoldPoint) -> float:
    """Scalar curvature of the hypersurface at p."""
    rho, ric_nn, btrace = sub_scalar_parts(j, c, p)
    return rho - 2.0 * ric_nn + btrace


# ---------------------------------------------------------------------------
# profile over the base coordinate


def scalar_profile(
    j: JMap,
    c: float,
    r: float,
    t_grid,
    n_dirs: int = 32,
    seed: int = 0,
) -> list[tuple[float, float, float, float]]:
    """Rows (t, rho_min, rho_max, rho_mean) over sampled fiber directions.

    The same seeded directions are reused for every t, so rows differ
    only through the base coordinate.  Requires a strictly increasing
    positive grid and at least one z direction.
    """
    if j.k < 1:
        raise ValidationError("profile needs at least one z direction")
    if not c > 0 or not r > 0:
        raise ValidationError("c and r must be positive")
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValidationError("t_grid must be a non-empty 1-d sequence")
    if not np.all(grid > 0) or not np.all(np.diff(grid) > 0):
        raise ValidationError("t_grid must be positive and strictly increasing")
    if n_dirs < 1:
        raise ValidationError("need at least one direction sample")

    curv = solvable_curvature(j, c)
    rho = float(curv.scalar)
    tv = j.v_frame()
    rng = np.random.default_rng(seed)
    dirs = []
    for _ in range(n_dirs):
        xf = rng.standard_normal(j.m)
        xf /= np.sqrt(xf @ xf)
        dirs.append(tv @ xf)

    rows = []
    for t in grid:
        vals = np.empty(n_dirs)
        for q, x in enumerate(dirs):
            pt = SubmanifoldPoint(t=float(t), x_dir=x, r=r)
            nf = unit_normal(j, pt)
            ric_nn = float(nf @ curv.ricci @ nf)
            B = weingarten(j, pt).B
            vals[q] = rho - 2.0 * ric_nn + np.trace(B) ** 2 - np.trace(B @ B)
        rows.append((float(t), float(vals.min()), float(vals.max()), float(vals.mean())))
    return rows


def profile_csv(rows) -> str:
    lines = ["t,rho_min,rho_max,rho_mean"]
    for t, lo, hi, mean in rows:
        lines.append(f"{t:.17g},{lo:.17g},{hi:.17g},{mean:.17g}")
    return "\n".join(lines) + "\n"
