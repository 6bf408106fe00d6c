"""Extremal sectional curvature and the sign-change threshold in c.

The family g(j, c) interpolates between the nilpotent geometry (c -> 0)
and a rank-one symmetric-like geometry (large c).  For every j there is
a critical value of c where the maximal sectional curvature crosses
zero; lambda_bisect brackets it.  The maximization itself runs on the
orthonormal-pair manifold via the kernel in kernels.py, seeded with all
frame planes, any caller probes, and deterministic random starts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .curvature import CurvatureData, solvable_curvature
from .jmaps import is_isospectral
from .kernels import ascend, orth_pairs, plane_values
from .lie_model import JMap
from .linalg import ValidationError
from .submanifold import SubmanifoldPoint, weingarten

FRAME_PAIR_LIMIT = 16  # enumerate all frame planes up to this dimension


@dataclass(frozen=True)
class PlaneSearchResult:
    """Outcome of one maximization of K over tangent planes."""

    value: float
    u: np.ndarray          # witness plane, original coordinates, gram-orthonormal
    v: np.ndarray
    values: np.ndarray     # attained value of every start, ascent order
    n_starts: int

    def witness_pair(self) -> tuple[np.ndarray, np.ndarray]:
        return self.u.copy(), self.v.copy()


def _start_stack(curv: CurvatureData, probes, restarts: int, seed) -> tuple[np.ndarray, np.ndarray]:
    n = curv.n
    us, vs = [], []
    if n <= FRAME_PAIR_LIMIT:
        for i, j in itertools.combinations(range(n), 2):
            us.append(np.eye(n)[i])
            vs.append(np.eye(n)[j])
    for u, v in probes or ():
        us.append(curv.to_frame(u))
        vs.append(curv.to_frame(v))
    if restarts > 0:
        rng = np.random.default_rng(seed)
        us.append(rng.standard_normal((restarts, n)))
        vs.append(rng.standard_normal((restarts, n)))
        return np.vstack([np.atleast_2d(x) for x in us]), np.vstack(
            [np.atleast_2d(x) for x in vs]
        )
    if not us:
        raise ValidationError("no starts: need probes or restarts > 0")
    return np.vstack([np.atleast_2d(x) for x in us]), np.vstack([np.atleast_2d(x) for x in vs])


def max_sectional(
    curv: CurvatureData,
    restarts: int = 64,
    seed: int = 0,
    probes=None,
    max_iter: int = 500,
    gtol: float = 1e-12,
) -> PlaneSearchResult:
    """Maximize sectional curvature over all tangent planes.

    ``probes`` is an iterable of (u, v) pairs in original coordinates,
    used as extra starts (warm starts from nearby problems).
    """
    su, sv = _start_stack(curv, probes, restarts, seed)
    values, us, vs = ascend(curv.R, su, sv, max_iter=max_iter, gtol=gtol)
    best = int(np.argmax(values))
    u = curv.frame @ us[best]
    v = curv.frame @ vs[best]
    return PlaneSearchResult(
        value=float(values[best]), u=u, v=v, values=values, n_starts=len(values)
    )


@dataclass(frozen=True)
class ThresholdReport:
    """Bracketed sign change of max K along the family c -> g(j, c)."""

    c_low: float
    c_high: float
    estimate: float
    max_at_low: float
    max_at_high: float
    witness_low: tuple[np.ndarray, np.ndarray]
    witness_high: tuple[np.ndarray, np.ndarray]
    evaluations: tuple[tuple[float, float], ...]   # (c, max K) in evaluation order
    restarts: int
    seed: int

    def validate(self) -> None:
        if not (self.c_low < self.estimate <= self.c_high):
            raise ValidationError("threshold estimate escaped its bracket")
        if self.max_at_high >= 0.0:
            raise ValidationError("upper endpoint does not have negative max curvature")
        if self.max_at_low < -1e-9:
            raise ValidationError("lower endpoint lost its nonnegative max curvature")


def lambda_bisect(
    j: JMap,
    c_low: float = 0.25,
    c_high: float = 4.0,
    tol_c: float = 1e-6,
    restarts: int = 64,
    seed: int = 0,
    max_iter: int = 500,
) -> ThresholdReport:
    """Bisect for the c where max sectional curvature changes sign.

    Every evaluation is warm-started with the witness planes of all
    previous ones (converted through original coordinates, which are
    shared across the family).
    """
    if not 0 < c_low < c_high:
        raise ValidationError(f"need 0 < c_low < c_high, got ({c_low}, {c_high})")
    witnesses: list[tuple[np.ndarray, np.ndarray]] = []
    evals: list[tuple[float, float]] = []

    def k_max(c: float) -> PlaneSearchResult:
        curv = solvable_curvature(j, c)
        res = max_sectional(curv, restarts=restarts, seed=seed, probes=witnesses, max_iter=max_iter)
        witnesses.append((res.u, res.v))
        evals.append((c, res.value))
        return res

    lo_res = k_max(c_low)
    if lo_res.value < 0.0:
        raise ValidationError(
            f"max K at c_low={c_low} is already negative ({lo_res.value:.3e}); "
            "widen the bracket downward"
        )
    hi_res = k_max(c_high)
    if hi_res.value >= 0.0:
        raise ValidationError(
            f"max K at c_high={c_high} is still nonnegative ({hi_res.value:.3e}); "
            "widen the bracket upward"
        )
    lo, hi = c_low, c_high
    while hi - lo > tol_c:
        mid = 0.5 * (lo + hi)
        res = k_max(mid)
        if res.value >= 0.0:
            lo, lo_res = mid, res
        else:
            hi, hi_res = mid, res
    report = ThresholdReport(
        c_low=lo,
        c_high=hi,
        estimate=0.5 * (lo + hi),
        max_at_low=lo_res.value,
        max_at_high=hi_res.value,
        witness_low=(lo_res.u, lo_res.v),
        witness_high=(hi_res.u, hi_res.v),
        evaluations=tuple(evals),
        restarts=restarts,
        seed=seed,
    )
    report.validate()
    return report


# ---------------------------------------------------------------------------
# hypersurface version: maximize over (t, direction, tangent plane)


@dataclass(frozen=True)
class SubmanifoldSearchResult:
    """Best hypersurface plane found, with the point that attains it."""

    value: float
    point: SubmanifoldPoint
    u: np.ndarray          # ambient frame coordinates, tangent at point
    v: np.ndarray
    values: np.ndarray     # best value of every restart
    n_restarts: int

    def witness(self) -> tuple[SubmanifoldPoint, np.ndarray, np.ndarray]:
        return self.point, self.u.copy(), self.v.copy()


def _pair_tensor(Ba: np.ndarray, Bb: np.ndarray) -> np.ndarray:
    return np.einsum("al,bk->abkl", Ba, Bb) - np.einsum("ak,bl->abkl", Ba, Bb)


def _restrict(R: np.ndarray, F: np.ndarray) -> np.ndarray:
    # one axis at a time; the single fused contraction is quartically slower
    out = np.tensordot(F, R, axes=(0, 0))
    out = np.tensordot(F, out, axes=(0, 1)).transpose(1, 0, 2, 3)
    out = np.tensordot(F, out, axes=(0, 2)).transpose(1, 2, 0, 3)
    return np.tensordot(F, out, axes=(0, 3)).transpose(1, 2, 3, 0)


def _direction_problem(curv: CurvatureData, j: JMap, x_dir, r: float):
    """Gauss tensor split G(s) = G0 + s G1 + s^2 G2 with s = sqrt(t).

    The shape operator is affine in s at fixed direction, B = (s/r) P + C
    with P the sphere-block projector, so the Gauss correction splits
    exactly into three constant tensors.  The s^2 part contracts to
    <Pu,u><Pv,v> - <Pu,v>^2 >= 0 on any plane: per-plane curvature is
    convex in s, hence maximal at an endpoint of the t-range.  The
    searches below only ever evaluate the two endpoints.
    """
    wd = weingarten(j, SubmanifoldPoint(t=1.0, x_dir=x_dir, r=r))
    F = wd.frame
    d = F.shape[1]
    P = np.zeros((d, d))
    P[: j.m - 1, : j.m - 1] = np.eye(j.m - 1)
    C = wd.B - P / r
    Rt = _restrict(curv.R, F)
    G0 = Rt + _pair_tensor(C, C)
    G1 = (_pair_tensor(P, C) + _pair_tensor(C, P)) / r
    G2 = _pair_tensor(P, P) / (r * r)
    return G0, G1, G2, F


def _plane_stack(d: int, warm, n_random: int, rng, frame_pairs: bool) -> tuple[np.ndarray, np.ndarray]:
    us, vs = [], []
    if frame_pairs and d <= FRAME_PAIR_LIMIT:
        eye = np.eye(d)
        for a, b in itertools.combinations(range(d), 2):
            us.append(eye[a])
            vs.append(eye[b])
    for wu, wv in warm:
        us.append(wu)
        vs.append(wv)
    if n_random > 0:
        us.append(rng.standard_normal((n_random, d)))
        vs.append(rng.standard_normal((n_random, d)))
    return np.vstack([np.atleast_2d(x) for x in us]), np.vstack([np.atleast_2d(x) for x in vs])


def _solve_direction(curv, j, x_dir, r, s_ends, warm, rng, max_iter, lean: bool):
    """Best plane over both s endpoints at one sphere direction."""
    G0, G1, G2, F = _direction_problem(curv, j, x_dir, r)
    d = F.shape[1]
    warm_t = []
    for wu, wv in warm:
        au, av = F.T @ wu, F.T @ wv
        if au @ au > 1e-4 and av @ av > 1e-4:
            warm_t.append((au, av))
    best = None
    for s in s_ends:
        G = G0 + s * G1 + (s * s) * G2
        if lean and warm_t:
            su, sv = _plane_stack(d, warm_t, 2, rng, frame_pairs=False)
            iters = min(max_iter, 100)
        else:
            su, sv = _plane_stack(d, warm_t, 3, rng, frame_pairs=True)
            iters = max_iter
        values, us, vs = ascend(G, su, sv, max_iter=iters)
        b = int(np.argmax(values))
        if best is None or values[b] > best[0]:
            best = (float(values[b]), float(s), us[b], vs[b])
    val, s, au, av = best
    return val, s, F @ au, F @ av, F


_CLIMB_LEVELS = (0.3, 0.1)
_CLIMB_PROBES = 2


def max_sectional_submanifold(
    j: JMap,
    c: float,
    r: float,
    t_range: tuple[float, float],
    restarts: int = 64,
    seed: int = 0,
    probes=None,
    max_iter: int = 200,
) -> SubmanifoldSearchResult:
    """Maximize hypersurface sectional curvature over (t, direction, plane).

    Multi-start over the sphere direction with a shrinking-step hill
    climb, exact endpoint evaluation in t (see _direction_problem), and
    kernel ascent over tangent planes.  ``probes`` are
    (point, u, v) witnesses from nearby problems, replayed as extra
    restarts.  The value is attained by the returned witness; as with
    the ambient search it is a certified lower bound on the true max.
    """
    t1, t2 = float(t_range[0]), float(t_range[1])
    if not (0 < t1 <= t2):
        raise ValidationError(f"need 0 < t1 <= t2, got ({t1}, {t2})")
    if not r > 0:
        raise ValidationError(f"radius must be positive, got {r}")
    if restarts < 1:
        raise ValidationError("restarts must be at least 1")
    curv = solvable_curvature(j, c)
    tv = j.v_frame()
    s_ends = (np.sqrt(t1), np.sqrt(t2)) if t2 > t1 else (np.sqrt(t1),)
    probes = list(probes or ())

    pinned = [np.eye(j.m)[0], np.eye(j.m)[j.m - 1], np.full(j.m, 1.0 / np.sqrt(j.m))]
    total = restarts + len(probes)
    values = np.empty(total)
    best = None
    for rr in range(total):
        rng = np.random.default_rng([seed, rr])
        if rr < restarts:
            if rr < len(pinned):
                xf = pinned[rr]
            else:
                xf = rng.standard_normal(j.m)
                xf /= np.sqrt(xf @ xf)
            warm = []
        else:
            point, wu, wv = probes[rr - restarts]
            xf = np.linalg.solve(tv, point.x_dir)
            xf /= np.sqrt(xf @ xf)
            warm = [(wu, wv)]
        cand = _solve_direction(curv, j, tv @ xf, r, s_ends, warm, rng, max_iter, lean=False)
        for level in _CLIMB_LEVELS:
            for _ in range(_CLIMB_PROBES):
                xi = rng.standard_normal(j.m)
                xi -= (xi @ xf) * xf
                nrm = np.sqrt(xi @ xi)
                if nrm < 1e-12:
                    continue
                xf_try = xf + (level / nrm) * xi
                xf_try /= np.sqrt(xf_try @ xf_try)
                trial = _solve_direction(
                    curv, j, tv @ xf_try, r, s_ends,
                    [(cand[2], cand[3])], rng, max_iter, lean=True,
                )
                if trial[0] > cand[0]:
                    cand = trial
                    xf = xf_try
        values[rr] = cand[0]
        if best is None or cand[0] > best[0][0]:
            best = (cand, xf)
    (val, s, u, v, _), xf = best
    point = SubmanifoldPoint(t=s * s, x_dir=tv @ xf, r=r)
    return SubmanifoldSearchResult(
        value=val, point=point, u=u, v=v, values=values, n_restarts=total
    )


@dataclass(frozen=True)
class SubmanifoldThresholdReport:
    """Bracketed sign change of the hypersurface max curvature in c."""

    c_low: float
    c_high: float
    estimate: float
    max_at_low: float
    max_at_high: float
    point_low: SubmanifoldPoint
    witness_low: tuple[np.ndarray, np.ndarray]
    point_high: SubmanifoldPoint
    witness_high: tuple[np.ndarray, np.ndarray]
    evaluations: tuple[tuple[float, float], ...]
    restarts: int
    seed: int

    def validate(self) -> None:
        if not (self.c_low < self.estimate <= self.c_high):
            raise ValidationError("threshold estimate escaped its bracket")
        if self.max_at_high >= 0.0:
            raise ValidationError("upper endpoint does not have negative max curvature")
        if self.max_at_low < -1e-9:
            raise ValidationError("lower endpoint lost its nonnegative max curvature")


def lambda_submanifold(
    j: JMap,
    r: float,
    t_range: tuple[float, float],
    c_low: float = 0.25,
    c_high: float = 8.0,
    tol_c: float = 1e-6,
    restarts: int = 64,
    seed: int = 0,
    max_iter: int = 200,
) -> SubmanifoldThresholdReport:
    """Bisect for the c where the hypersurface max curvature changes sign.

    Witnesses (point and plane) accumulate across evaluations and are
    replayed as warm restarts, mirroring lambda_bisect.
    """
    if not 0 < c_low < c_high:
        raise ValidationError(f"need 0 < c_low < c_high, got ({c_low}, {c_high})")
    witnesses: list[tuple[SubmanifoldPoint, np.ndarray, np.ndarray]] = []
    evals: list[tuple[float, float]] = []

    def k_max(c: float) -> SubmanifoldSearchResult:
        res = max_sectional_submanifold(
            j, c, r, t_range, restarts=restarts, seed=seed, probes=witnesses, max_iter=max_iter
        )
        witnesses.append(res.witness())
        evals.append((c, res.value))
        return res

    lo_res = k_max(c_low)
    if lo_res.value < 0.0:
        raise ValidationError(
            f"max K at c_low={c_low} is already negative ({lo_res.value:.3e}); "
            "widen the bracket downward"
        )
    hi_res = k_max(c_high)
    if hi_res.value >= 0.0:
        raise ValidationError(
            f"max K at c_high={c_high} is still nonnegative ({hi_res.value:.3e}); "
            "widen the bracket upward"
        )
    lo, hi = c_low, c_high
    while hi - lo > tol_c:
        mid = 0.5 * (lo + hi)
        res = k_max(mid)
        if res.value >= 0.0:
            lo, lo_res = mid, res
        else:
            hi, hi_res = mid, res
    report = SubmanifoldThresholdReport(
        c_low=lo,
        c_high=hi,
        estimate=0.5 * (lo + hi),
        max_at_low=lo_res.value,
        max_at_high=hi_res.value,
        point_low=lo_res.point,
        witness_low=(lo_res.u, lo_res.v),
        point_high=hi_res.point,
        witness_high=(hi_res.u, hi_res.v),
        evaluations=tuple(evals),
        restarts=restarts,
        seed=seed,
    )
    report.validate()
    return report


# ---------------------------------------------------------------------------
# threshold scan over a parameterized family


@dataclass(frozen=True)
class FamilyScanRow:
    tag: float
    report: ThresholdReport


def family_scan(
    members,
    c_low: float = 0.25,
    c_high: float = 4.0,
    tol_c: float = 1e-4,
    restarts: int = 32,
    seed: int = 0,
    force: bool = False,
) -> list[FamilyScanRow]:
    """Per-member threshold bisection over a tagged family of j-maps.

    ``members`` is a sequence of (tag, jmap) pairs.  All members must be
    isospectral to the first; a family failing that gate is refused
    unless ``force=True``, because comparing thresholds across
    non-isospectral maps answers no meaningful question.  Every member
    runs with the same seed so identical maps produce identical rows.
    """
    members = list(members)
    if not members:
        raise ValidationError("family is empty")
    tags = [float(t) for t, _ in members]
    maps = [jm for _, jm in members]
    if not force:
        bad = []
        for q in range(1, len(maps)):
            try:
                ok = is_isospectral(maps[0], maps[q]).verdict
            except ValidationError:
                ok = False  # incomparable shapes cannot be isospectral
            if not ok:
                bad.append(tags[q])
        if bad:
            raise ValidationError(
                f"family members tagged {bad} are not isospectral to the first member; "
                "pass force=True to scan anyway"
            )
    rows = []
    for tag, jm in zip(tags, maps):
        rep = lambda_bisect(
            jm, c_low=c_low, c_high=c_high, tol_c=tol_c, restarts=restarts, seed=seed
        )
        rows.append(FamilyScanRow(tag=tag, report=rep))
    return rows


def family_csv(rows) -> str:
    lines = ["t,lambda,c_low,c_high,K_max_at_low,restarts"]
    for row in rows:
        rep = row.report
        lines.append(
            f"{row.tag:.17g},{rep.estimate:.17g},{rep.c_low:.17g},"
            f"{rep.c_high:.17g},{rep.max_at_low:.17g},{rep.restarts}"
        )
    return "\n".join(lines) + "\n"


def family_json(rows) -> dict:
    out = []
    for row in rows:
        rep = row.report
        out.append(
            {
                "t": row.tag,
                "lambda": rep.estimate,
                "c_low": rep.c_low,
                "c_high": rep.c_high,
                "K_max_at_low": rep.max_at_low,
                "K_max_at_high": rep.max_at_high,
                "restarts": rep.restarts,
                "seed": rep.seed,
                "witness_low": {
                    "u": rep.witness_low[0].tolist(),
                    "v": rep.witness_low[1].tolist(),
                },
                "witness_high": {
                    "u": rep.witness_high[0].tolist(),
                    "v": rep.witness_high[1].tolist(),
                },
            }
        )
    return {"members": out}
