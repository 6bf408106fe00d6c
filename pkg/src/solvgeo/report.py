"""One deterministic pass over the package acceptance gate.

Nine numbered criteria, each a tuple of named clauses carrying observed
and required values.  Three clauses document discrepancies that are
real properties of the construction (see the README section on known
discrepancies); they stay red on purpose and carry
``expected_failure=True`` so tooling can separate them from
regressions.

Nothing here reads the clock or the environment: same seed, same
payload, bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .catalog import catalog_build, catalog_names, qab, square_lattice
from .curvature import (
    closed_form_connection,
    connection,
    curvature,
    mean_curvature,
    solvable_curvature,
    symmetry_residuals,
)
from .homogeneous import (
    constant_scalar_verdict,
    damek_witness,
    einstein_check,
    nil_sphere_samples,
    nil_sphere_scalar,
    nil_sphere_scalar_closed,
)
from .jmaps import (
    build_equivalence_isometry,
    find_equivalence,
    find_lattice_equivalence,
    is_heisenberg_type,
    is_isospectral,
    spectrum_at,
)
from .lie_model import (
    JMap,
    ValidationError,
    hyperbolic_algebra,
    jmaps_compatible,
    quotient_data,
    solvable_extension,
)
from .submanifold import (
    SubmanifoldPoint,
    scalar_profile,
    sub_scalar_parts,
    weingarten,
    weingarten_transport,
)
from .threshold import lambda_bisect, max_sectional, max_sectional_submanifold

__all__ = [
    "Clause",
    "CriterionResult",
    "PairReport",
    "SubtorusCheck",
    "criterion_1",
    "criterion_2",
    "criterion_3",
    "criterion_4",
    "criterion_5",
    "criterion_6",
    "criterion_7",
    "criterion_8",
    "criterion_9",
    "full_report",
    "isospectral_pair_report",
    "report_lines",
    "report_payload",
]


def _fmt(x: float) -> str:
    return "%.6g" % float(x)


@dataclass(frozen=True)
class Clause:
    """One named check inside a criterion.

    ``observed`` and ``required`` are short human-readable strings;
    ``expected_failure`` marks a documented discrepancy that is
    asserted literally and known to be red.
    """

    name: str
    passed: bool
    observed: str
    required: str
    expected_failure: bool = False


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    clauses: tuple[Clause, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    @property
    def passed_modulo_documented(self) -> bool:
        return all(c.passed or c.expected_failure for c in self.clauses)


def _random_jmap(rng, m: int, k: int) -> JMap:
    mats = rng.standard_normal((k, m, m))
    return JMap.create(mats - np.transpose(mats, (0, 2, 1)))


# ---------------------------------------------------------------------------
# criteria


def criterion_1(restarts: int = 64, seed: int = 0) -> CriterionResult:
    """Connection coefficients: closed form against the Koszul route."""
    rng = np.random.default_rng([seed, 1])
    worst = 0.0
    for _ in range(20):
        m = int(rng.integers(4, 9))
        k = int(rng.integers(1, 4))
        j = _random_jmap(rng, m, k)
        c = float(rng.uniform(0.5, 2.0))
        gamma = closed_form_connection(j, c)
        koszul = connection(solvable_extension(j, c))
        worst = max(worst, float(np.max(np.abs(gamma - koszul))))
    clause = Clause(
        "koszul-agreement",
        worst < 1e-12,
        f"max deviation {_fmt(worst)} over 20 random (j, c)",
        "< 1e-12",
    )
    return CriterionResult(1, "closed-form connection", (clause,))


def criterion_2(restarts: int = 64, seed: int = 0) -> CriterionResult:
    """The degenerate extension is a constant-curvature floor."""
    rng = np.random.default_rng([seed, 2])
    worst = 0.0
    for c in (0.5, 1.0, 2.0):
        curv = curvature(hyperbolic_algebra(5, c))
        want = -c * c / 4.0
        n = curv.n
        for a in range(n):
            for b in range(a + 1, n):
                worst = max(worst, abs(curv.sectional_frame(a, b) - want))
        for _ in range(40):
            u, v = rng.standard_normal((2, n))
            worst = max(worst, abs(curv.sectional(u, v) - want))
    clause = Clause(
        "constant-sectional",
        worst < 1e-9,
        f"max |K + c^2/4| = {_fmt(worst)} for c in (0.5, 1, 2)",
        "< 1e-9 on every sampled 2-plane",
    )
    return CriterionResult(2, "constant-curvature floor", (clause,))


def criterion_3(restarts: int = 64, seed: int = 0) -> CriterionResult:
    """Mean curvature of central subgroup orbits: c^2 dim(w) A."""
    rng = np.random.default_rng([seed, 3])
    m, k = 6, 3
    worst = 0.0
    for c in (0.5, 1.5):
        for draw in range(5):
            j = _random_jmap(rng, m, k)
            curv = solvable_curvature(j, c)
            d = 1 + draw % k
            tangent = np.zeros((m + k + 1, d))
            tangent[m:m + k, :] = rng.standard_normal((k, d))
            want = np.zeros(m + k + 1)
            want[-1] = c * c * d
            h = mean_curvature(curv, tangent)
            worst = max(worst, float(np.max(np.abs(h - want))))
    clause = Clause(
        "fiber-mean-curvature",
        worst < 1e-12,
        f"max |H - c^2 dim(w) A| = {_fmt(worst)} over 5 subspaces x 2 values of c",
        "< 1e-12",
    )
    return CriterionResult(3, "fiber mean curvature", (clause,))


def criterion_4(restarts: int = 64, seed: int = 0) -> CriterionResult:
    """The quaternionic pair: isospectral, inequivalent, and separated
    by the sign behaviour of sectional curvature."""
    q20 = catalog_build("qab(2,0)").jmap
    q11 = catalog_build("qab(1,1)").jmap
    clauses = []

    worst_h = 0.0
    for name in catalog_names():
        if name.startswith("qab"):
            worst_h = max(worst_h, is_heisenberg_type(catalog_build(name).jmap).residual)
    clauses.append(Clause(
        "h-type-family",
        worst_h < 1e-9,
        f"worst polarization residual {_fmt(worst_h)} across the qab members",
        "< 1e-9",
    ))

    iso = is_isospectral(q20, q11)
    clauses.append(Clause(
        "pair-isospectral",
        iso.verdict,
        f"trace residual {_fmt(iso.worst_residual)} through power {iso.max_power_checked}",
        "spectra of j(z) agree for every z",
    ))

    cert = find_equivalence(q20, q11, restarts=min(restarts, 200), seed=seed)
    sep = cert.obstruction[0] if cert.obstruction else "none"
    clauses.append(Clause(
        "pair-obstructed",
        cert.status == "obstructed",
        f"status {cert.status}, separating invariant {sep}",
        "no orthogonal equivalence exists",
    ))

    search = max_sectional(solvable_curvature(q11, 1.0), restarts=restarts, seed=seed)
    clauses.append(Clause(
        "balanced-max-zero",
        abs(search.value) < 1e-6,
        f"max K = {_fmt(search.value)} at c = 1",
        "0 within 1e-6",
    ))

    x = np.zeros(8)
    y = np.zeros(8)
    x[1] = x[5] = 1.0
    y[2] = y[6] = 1.0
    rep = damek_witness(q11, x, y)
    flat = rep.flat_curvature if rep.flat_curvature is not None else float("nan")
    clauses.append(Clause(
        "mixed-witness-flat",
        rep.status == "flat_plane" and abs(flat) < 1e-12,
        f"status {rep.status}, K = {_fmt(flat)} at mixing weight {_fmt(rep.mix or 0.0)}",
        "a flat plane on the commuting family, |K| < 1e-12",
    ))
    clauses.append(Clause(
        "commuting-span-flat",
        rep.span_curvature is not None and abs(rep.span_curvature) < 1e-12,
        f"K(span) = {_fmt(rep.span_curvature)}",
        "0 within 1e-12",
        expected_failure=True,
    ))

    thr = lambda_bisect(q11, 0.5, 2.0, tol_c=1e-3, restarts=restarts, seed=seed)
    clauses.append(Clause(
        "balanced-threshold",
        abs(thr.estimate - 1.0) <= 1e-3,
        f"threshold estimate {_fmt(thr.estimate)} in ({_fmt(thr.c_low)}, {_fmt(thr.c_high)})",
        "1.000 within 1e-3",
    ))

    thr2 = lambda_bisect(q20, 0.25, 2.0, tol_c=1e-3, restarts=restarts, seed=seed)
    clauses.append(Clause(
        "one-sided-threshold-floor",
        thr2.c_low >= 1.0,
        f"threshold estimate {_fmt(thr2.estimate)}",
        "c_low >= 1 after bisection",
        expected_failure=True,
    ))

    search2 = max_sectional(solvable_curvature(q20, 1.0), restarts=restarts, seed=seed)
    clauses.append(Clause(
        "one-sided-max",
        abs(search2.value + 0.25) < 1e-6,
        f"max K = {_fmt(search2.value)} at c = 1",
        "-0.25 within 1e-6",
    ))

    return CriterionResult(4, "quaternionic pair suite", tuple(clauses))


def criterion_5(restarts: int = 64, seed: int = 0) -> CriterionResult:
    """The six-dimensional pair: matching spectra, split verdicts."""
    cross = catalog_build("ex26_cross").jmap
    quat = catalog_build("ex26_quat").jmap
    rng = np.random.default_rng([seed, 5])
    worst = 0.0
    mults_ok = True
    for _ in range(20):
        z = rng.standard_normal(3)
        for j in (cross, quat):
            omega = math.sqrt(1.5 * float(z @ j.gram_z @ z))
            spec = spectrum_at(j, z)
            mults_ok = mults_ok and tuple(m for _, m in spec) == (2, 2)
            worst = max(worst, abs(spec[0][0]), abs(spec[1][0] - omega))
    clauses = [Clause(
        "split-spectrum",
        worst < 1e-10 and mults_ok,
        f"max deviation {_fmt(worst)} from (0 x2, sqrt(3/2)|Z| x2) over 20 draws",
        "< 1e-10 with multiplicities (2, 2)",
    )]

    ec = einstein_check(cross)
    eq = einstein_check(quat)
    clauses.append(Clause(
        "einstein-split",
        ec.passed and (not eq.passed) and eq.condition_ii_residual > 0.5,
        "second-condition residuals: %s against %s"
        % (_fmt(ec.condition_ii_residual), _fmt(eq.condition_ii_residual)),
        "one passes both conditions, the other fails the second by > 0.5",
    ))

    clauses.append(Clause(
        "scalar-verdicts",
        constant_scalar_verdict(cross) and not constant_scalar_verdict(quat),
        "verdicts (%s, %s)" % (constant_scalar_verdict(cross), constant_scalar_verdict(quat)),
        "(True, False)",
    ))

    sc = nil_sphere_samples(cross, r=1.0, samples=100, seed=seed)
    sq = nil_sphere_samples(quat, r=1.0, samples=100, seed=seed)
    std_c = float(np.std(sc))
    rng_q = float(np.ptp(sq))
    clauses.append(Clause(
        "sampled-contrast",
        std_c < 1e-9 and rng_q > 1e-8,
        f"constant-side std {_fmt(std_c)}, varying-side range {_fmt(rng_q)}",
        "std < 1e-9 against range > 1e-8, 100 samples at r = 1",
    ))

    return CriterionResult(5, "scalar-verdict suite", tuple(clauses))


def criterion_6(restarts: int = 64, seed: int = 0) -> CriterionResult:
    """Sphere-bundle scalar curvature, closed form against the
    embedded-hypersurface route."""
    rng = np.random.default_rng([seed, 6])
    worst = 0.0
    for _ in range(20):
        m = int(rng.choice([4, 6, 8]))
        k = int(rng.integers(1, 4))
        j = _random_jmap(rng, m, k)
        for _ in range(20):
            x = rng.standard_normal(m)
            x /= np.linalg.norm(x)
            a = nil_sphere_scalar(j, 1.0, x)
            b = nil_sphere_scalar_closed(j, x)
            worst = max(worst, abs(a - b))
    clause = Clause(
        "dual-route-scalar",
        worst < 1e-8,
        f"max deviation {_fmt(worst)} over 20 j-maps x 20 directions",
        "< 1e-8",
    )
    return CriterionResult(6, "sphere scalar dual route", (clause,))


def criterion_7(restarts: int = 64, seed: int = 0) -> CriterionResult:
    """Shape operator of the invariant hypersurfaces."""
    rng = np.random.default_rng([seed, 7])
    q11 = catalog_build("qab(1,1)").jmap
    worst_rt = 0.0
    worst_sym = 0.0
    bitwise = True
    for _ in range(10):
        m = int(rng.choice([4, 6, 8]))
        k = int(rng.integers(1, 4))
        j = _random_jmap(rng, m, k)
        x = rng.standard_normal(m)
        x /= np.linalg.norm(x)
        p = SubmanifoldPoint(
            t=float(rng.uniform(0.5, 4.0)),
            x_dir=x,
            r=float(rng.uniform(0.5, 2.0)),
        )
        closed = weingarten(j, p).B
        bitwise = bitwise and np.array_equal(closed, weingarten(j, p).B)
        worst_sym = max(worst_sym, float(np.max(np.abs(closed - closed.T))))
        for c in (0.7, 1.3):
            tr = weingarten_transport(j, c, p)
            worst_rt = max(worst_rt, float(np.max(np.abs(closed - tr))))
    clauses = [
        Clause(
            "transport-agreement",
            worst_rt < 1e-10,
            f"max deviation {_fmt(worst_rt)} over 10 draws x 2 ambient scalings",
            "< 1e-10",
        ),
        Clause(
            "scaling-free",
            bitwise,
            "closed form takes no ambient scaling input; repeat calls bitwise equal",
            "identical B for every c",
        ),
        Clause(
            "self-adjoint",
            worst_sym < 1e-10,
            f"max |B - B^T| = {_fmt(worst_sym)}",
            "< 1e-10",
        ),
    ]

    base = np.eye(8)[:, 0]
    parts = [
        sub_scalar_parts(q11, 1.0, SubmanifoldPoint(t=t, x_dir=base, r=1.0))
        for t in (1.0, 2.0, 3.0, 4.0)
    ]
    ric = np.array([p[1] for p in parts])
    btr = np.array([p[2] for p in parts])
    clauses.append(Clause(
        "normal-ricci-static",
        float(np.ptp(ric)) < 1e-12 and float(np.ptp(btr)) > 1e-6,
        f"Ric(n, n) spread {_fmt(float(np.ptp(ric)))}, trace-term spread {_fmt(float(np.ptp(btr)))}",
        "Ric(n, n) flat within 1e-12 while the trace term moves by > 1e-6 over t in [1, 4]",
    ))

    prof = scalar_profile(q11, 1.0, 1.0, (1.0, 2.0, 3.0, 4.0), n_dirs=8, seed=seed)
    means = np.array([row[3] for row in prof])
    clauses.append(Clause(
        "profile-nonconstant",
        float(np.ptp(means)) > 1e-6,
        f"mean scalar spread {_fmt(float(np.ptp(means)))} over the t grid",
        "> 1e-6",
    ))

    return CriterionResult(7, "shape-operator suite", tuple(clauses))


def criterion_8(restarts: int = 64, seed: int = 0) -> CriterionResult:
    """Hypersurface curvature maxima along increasing ambient scaling."""
    q11 = catalog_build("qab(1,1)").jmap
    sub_restarts = max(4, restarts // 8)
    values = {}
    for c in (1.0, 2.0, 4.0):
        res = max_sectional_submanifold(
            q11, c, 1.0, (1.0, 4.0), restarts=sub_restarts, seed=seed,
        )
        values[c] = res.value
    spread = ", ".join(f"c={_fmt(c)}: {_fmt(v)}" for c, v in values.items())
    clauses = [
        Clause(
            "trend-decreasing",
            values[1.0] > values[2.0] > values[4.0],
            spread,
            "strictly decreasing over c in (1, 2, 4)",
        ),
        Clause(
            "negative-at-top",
            values[4.0] < 0.0,
            f"max K = {_fmt(values[4.0])} at c = 4",
            "< 0",
            expected_failure=True,
        ),
    ]
    return CriterionResult(8, "hypersurface trend", tuple(clauses))


def criterion_9(restarts: int = 64, seed: int = 0) -> CriterionResult:
    """Cross-cutting guarantees: tensor symmetries, equivalence
    consistency, and bitwise determinism."""
    clauses = []

    worst = 0.0
    for name in catalog_names():
        curv = solvable_curvature(catalog_build(name).jmap, 1.0)
        worst = max(worst, max(symmetry_residuals(curv.R).values()))
    clauses.append(Clause(
        "curvature-symmetries",
        worst < 1e-10,
        f"worst symmetry or cyclic residual {_fmt(worst)} across the catalog",
        "< 1e-10",
    ))

    entries = [(name, catalog_build(name).jmap) for name in catalog_names()]
    q20 = dict(entries)["qab(2,0)"]
    q02 = qab(0, 2)
    q11 = dict(entries)["qab(1,1)"]
    rng = np.random.default_rng([seed, 9])
    alpha = np.linalg.qr(rng.standard_normal((q11.m, q11.m)))[0]
    planted = JMap.create(np.stack([alpha @ ji @ alpha.T for ji in q11.frame_operators()]))
    pairs = [(a, b) for (_, a), (_, b) in combinations(entries, 2)]
    pairs.append((q20, q02))
    pairs.append((q11, planted))
    certified = 0
    obstructed = 0
    consistent = True
    for a, b in pairs:
        try:
            jmaps_compatible(a, b)
        except ValidationError:
            continue
        cert = find_equivalence(a, b, restarts=min(restarts, 60), seed=seed)
        if cert.status == "certified":
            certified += 1
            consistent = consistent and is_isospectral(a, b).verdict
            tau = build_equivalence_isometry(a, b, cert, 1.0)
            consistent = consistent and tau.shape == (a.m + a.k + 1,) * 2
        elif cert.status == "obstructed":
            obstructed += 1
    clauses.append(Clause(
        "certified-implies-isospectral",
        consistent and certified >= 2,
        f"{certified} certified pairs (all isospectral, isometries assembled), {obstructed} obstructed",
        "every certified pair is isospectral, with at least 2 certified",
    ))

    lam_restarts = max(8, restarts // 4)
    thr_a = lambda_bisect(q20, 0.25, 2.0, tol_c=1e-3, restarts=lam_restarts, seed=seed)
    thr_b = lambda_bisect(q02, 0.25, 2.0, tol_c=1e-3, restarts=lam_restarts, seed=seed)
    gap = abs(thr_a.estimate - thr_b.estimate)
    clauses.append(Clause(
        "certified-pair-thresholds",
        gap < 2e-3,
        f"thresholds {_fmt(thr_a.estimate)} and {_fmt(thr_b.estimate)}, gap {_fmt(gap)}",
        "equal within twice the bisection tolerance",
    ))

    r1 = max_sectional_submanifold(q11, 1.5, 1.0, (1.0, 4.0), restarts=2, seed=seed)
    r2 = max_sectional_submanifold(q11, 1.5, 1.0, (1.0, 4.0), restarts=2, seed=seed)
    heis = dict(entries)["heis(2,1)"]
    t1 = lambda_bisect(heis, 0.5, 2.0, tol_c=1e-2, restarts=4, seed=seed)
    t2 = lambda_bisect(heis, 0.5, 2.0, tol_c=1e-2, restarts=4, seed=seed)
    bitwise = (
        r1.value == r2.value
        and np.array_equal(r1.u, r2.u)
        and np.array_equal(r1.v, r2.v)
        and t1.evaluations == t2.evaluations
    )
    clauses.append(Clause(
        "seeded-determinism",
        bitwise,
        "repeat searches bitwise equal" if bitwise else "repeat searches diverged",
        "identical values and witnesses for identical seeds",
    ))

    return CriterionResult(9, "cross-cutting guarantees", tuple(clauses))


_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
)


def full_report(restarts: int = 64, seed: int = 0) -> tuple[CriterionResult, ...]:
    """Evaluate every criterion.  Heavy searches honour ``restarts``."""
    return tuple(fn(restarts=restarts, seed=seed) for fn in _CRITERIA)


def report_payload(results) -> dict:
    return {
        "criteria": [
            {
                "number": r.number,
                "title": r.title,
                "passed": r.passed,
                "clauses": [
                    {
                        "name": c.name,
                        "passed": c.passed,
                        "observed": c.observed,
                        "required": c.required,
                        "expected_failure": c.expected_failure,
                    }
                    for c in r.clauses
                ],
            }
            for r in results
        ],
        "passed": all(r.passed for r in results),
        "passed_modulo_documented": all(r.passed_modulo_documented for r in results),
    }


def report_lines(results) -> list[str]:
    """One pass/fail line per criterion, failing clauses spelled out."""
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        note = ""
        failing = [c for c in r.clauses if not c.passed]
        if failing and all(c.expected_failure for c in failing):
            note = " (documented discrepancy)"
        lines.append(f"criterion {r.number} [{mark}] {r.title}{note}")
        for c in failing:
            lines.append(f"  - {c.name}: observed {c.observed}; required {c.required}")
    ok = all(r.passed for r in results)
    lines.append("overall: " + ("PASS" if ok else "FAIL"))
    return lines


# ---------------------------------------------------------------------------
# pair reports


@dataclass(frozen=True)
class SubtorusCheck:
    generators: tuple[tuple[int, ...], ...]   # integer columns, lattice basis
    status: str
    residual: float | None


@dataclass(frozen=True)
class PairReport:
    """Everything the package can say about one candidate pair."""

    m: int
    k: int
    isospectral: bool
    spectral_residual: float
    equivalence_status: str
    separating_invariant: str | None
    mean_curvature_match: bool
    fiber_mean_curvature: float
    einstein_first: bool
    einstein_second: bool
    constant_scalar_first: bool
    constant_scalar_second: bool
    subtorus_checks: tuple[SubtorusCheck, ...]
    conclusion: str

    def payload(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "isospectral": self.isospectral,
            "spectral_residual": self.spectral_residual,
            "equivalence_status": self.equivalence_status,
            "separating_invariant": self.separating_invariant,
            "mean_curvature_match": self.mean_curvature_match,
            "fiber_mean_curvature": self.fiber_mean_curvature,
            "einstein": [self.einstein_first, self.einstein_second],
            "constant_scalar": [self.constant_scalar_first, self.constant_scalar_second],
            "subtorus_checks": [
                {
                    "generators": [list(col) for col in s.generators],
                    "status": s.status,
                    "residual": s.residual,
                }
                for s in self.subtorus_checks
            ],
            "conclusion": self.conclusion,
        }

    def lines(self) -> list[str]:
        out = [
            f"pair on v of dimension {self.m} with {self.k} central directions",
            f"isospectral: {self.isospectral} (trace residual {_fmt(self.spectral_residual)})",
            f"equivalence: {self.equivalence_status}"
            + (f" (separated by {self.separating_invariant})" if self.separating_invariant else ""),
            f"fiber mean curvature: match={self.mean_curvature_match}, "
            f"|H| = {_fmt(self.fiber_mean_curvature)} on both sides",
            f"einstein verdicts: ({self.einstein_first}, {self.einstein_second})",
            f"constant scalar verdicts: ({self.constant_scalar_first}, {self.constant_scalar_second})",
        ]
        for s in self.subtorus_checks:
            gens = "; ".join(",".join(str(x) for x in col) for col in s.generators)
            res = "inf" if s.residual is None else _fmt(s.residual)
            out.append(f"subtorus [{gens}]: {s.status} (residual {res})")
        out.append(self.conclusion)
        return out


def isospectral_pair_report(
    j_a: JMap,
    j_b: JMap,
    lattice=None,
    c: float = 1.0,
    subtori=None,
    restarts: int = 60,
    seed: int = 0,
) -> PairReport:
    """Compare two j-maps every way the package knows how.

    ``subtori`` is an optional list of integer generator columns (with
    respect to the lattice basis); the default checks each coordinate
    axis when the center has dimension at least 2.  Raises
    ValidationError when the two maps have incomparable shapes.
    """
    jmaps_compatible(j_a, j_b)
    iso = is_isospectral(j_a, j_b)
    cert = find_equivalence(j_a, j_b, restarts=restarts, seed=seed)
    separating = cert.obstruction[0] if cert.obstruction else None

    n = j_a.m + j_a.k + 1
    fiber = np.eye(n)[:, j_a.m:j_a.m + j_a.k]
    h_a = mean_curvature(solvable_curvature(j_a, c), fiber)
    h_b = mean_curvature(solvable_curvature(j_b, c), fiber)
    match = float(np.max(np.abs(h_a - h_b))) < 1e-12

    checks = []
    if j_a.k >= 2:
        lat = lattice if lattice is not None else square_lattice(j_a.k)
        gens_list = subtori
        if gens_list is None:
            gens_list = [np.eye(j_a.k, dtype=int)[:, [i]] for i in range(j_a.k)]
        for gens in gens_list:
            gens = np.asarray(gens, dtype=int)
            if gens.ndim == 1:
                gens = gens.reshape(-1, 1)
            qa = quotient_data(j_a, lat, gens)
            qb = quotient_data(j_b, lat, gens)
            sub = find_lattice_equivalence(
                qa.jmap, qa.lattice, qb.jmap, qb.lattice,
                restarts=restarts, seed=seed,
            )
            residual = float(sub.residual) if math.isfinite(sub.residual) else None
            checks.append(SubtorusCheck(
                generators=tuple(tuple(int(x) for x in col) for col in gens.T),
                status=sub.status,
                residual=residual,
            ))

    if not iso.verdict:
        conclusion = "the operator spectra differ; not an isospectral pair"
    elif cert.status == "certified":
        conclusion = ("isospectral and orthogonally equivalent; the two metrics "
                      "agree up to isometry")
    elif cert.status == "obstructed":
        conclusion = ("isospectral with matching fiber geometry, yet no orthogonal "
                      "equivalence exists: the metrics sound alike and differ")
    else:
        conclusion = ("isospectral; the equivalence search was inconclusive at "
                      f"{restarts} restarts")

    return PairReport(
        m=j_a.m,
        k=j_a.k,
        isospectral=iso.verdict,
        spectral_residual=float(iso.worst_residual),
        equivalence_status=cert.status,
        separating_invariant=separating,
        mean_curvature_match=match,
        fiber_mean_curvature=float(np.linalg.norm(h_a)),
        einstein_first=einstein_check(j_a).passed,
        einstein_second=einstein_check(j_b).passed,
        constant_scalar_first=constant_scalar_verdict(j_a),
        constant_scalar_second=constant_scalar_verdict(j_b),
        subtorus_checks=tuple(checks),
        conclusion=conclusion,
    )
