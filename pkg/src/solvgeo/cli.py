"""Command-line front end.

Every verb takes j-maps either as catalog names (``qab(1,1)``,
``ex26_cross``, ``heis(4,1)``) or as paths to JSON files in the
interchange schema of :mod:`solvgeo.lie_model`.

Exit codes: 0 success or verdict true, 1 verdict false, 2 input error,
3 inconclusive search.  ``SOLVGEO_SEED`` supplies the default seed when
``--seed`` is absent; it is read here and nowhere else in the package.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .catalog import catalog_build, catalog_names
from .curvature import solvable_curvature, symmetry_residuals
from .homogeneous import constant_scalar_verdict, einstein_check, nil_sphere_samples
from .jmaps import find_equivalence, is_isospectral
from .lie_model import (
    JMap,
    Lattice,
    ValidationError,
    jmap_from_dict,
    validate_jmap,
)
from .report import full_report, report_lines, report_payload
from .submanifold import profile_csv, scalar_profile
from .threshold import (
    family_csv,
    family_json,
    family_scan,
    lambda_bisect,
    lambda_submanifold,
    max_sectional_submanifold,
)

__all__ = ["main"]


def _looks_like_path(spec: str) -> bool:
    return os.path.exists(spec) or spec.endswith(".json") or os.path.sep in spec


def _read_doc(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ValidationError(f"cannot read j-map file {path}: {err}") from None
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: top level must be an object")
    return doc


def _load(spec: str) -> tuple[JMap, Lattice | None]:
    if _looks_like_path(spec):
        return jmap_from_dict(_read_doc(spec))
    return catalog_build(spec).jmap, None


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for ln in lines:
            print(ln)


def _fmt(x: float) -> str:
    return "%.10g" % float(x)


# ---------------------------------------------------------------------------
# verb handlers


def _cmd_validate(args) -> int:
    if _looks_like_path(args.jmap):
        doc = _read_doc(args.jmap)
        try:
            j, lat = jmap_from_dict(doc)
            notes = validate_jmap(j, lat)
        except ValidationError as err:
            _emit(args, {"valid": False, "problem": str(err)},
                  [f"invalid: {err}"])
            return 1
    else:
        j = catalog_build(args.jmap).jmap
        lat = None
        notes = validate_jmap(j, lat)
    payload = {"valid": True, "m": j.m, "k": j.k, "notes": notes}
    _emit(args, payload, ["valid"] + [f"  {n}" for n in notes])
    return 0


def _cmd_curvature(args) -> int:
    j, _ = _load(args.jmap)
    curv = solvable_curvature(j, args.c)
    res = symmetry_residuals(curv.R)
    eig = np.linalg.eigvalsh((curv.ricci + curv.ricci.T) / 2.0)
    payload = {
        "n": curv.n,
        "c": args.c,
        "scalar": curv.scalar,
        "ricci_eigenvalues": [float(x) for x in eig],
        "symmetry_residuals": {k: float(v) for k, v in res.items()},
    }
    lines = [
        f"g(j, c={_fmt(args.c)}) on {curv.n} dimensions",
        f"scalar curvature {_fmt(curv.scalar)}",
        f"ricci eigenvalues in [{_fmt(eig[0])}, {_fmt(eig[-1])}]",
        "tensor residuals " + ", ".join(f"{k}={v:.2e}" for k, v in sorted(res.items())),
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_isospectral(args) -> int:
    ja, _ = _load(args.first)
    jb, _ = _load(args.second)
    rep = is_isospectral(ja, jb, tol=args.tol if args.tol is not None else 1e-8)
    payload = {
        "isospectral": rep.verdict,
        "worst_residual": rep.worst_residual,
        "max_power_checked": rep.max_power_checked,
        "witness_z": None if rep.witness_z is None else [float(x) for x in rep.witness_z],
    }
    lines = [f"isospectral: {rep.verdict} "
             f"(trace residual {_fmt(rep.worst_residual)} through power {rep.max_power_checked})"]
    if rep.witness_z is not None:
        lines.append("separating z: " + ", ".join(_fmt(x) for x in rep.witness_z))
    _emit(args, payload, lines)
    return 0 if rep.verdict else 1


def _cmd_equivalent(args) -> int:
    ja, _ = _load(args.first)
    jb, _ = _load(args.second)
    cert = find_equivalence(
        ja, jb,
        restarts=args.restarts if args.restarts is not None else 200,
        seed=args.seed,
    )
    payload = {
        "status": cert.status,
        "residual": cert.residual if np.isfinite(cert.residual) else None,
        "restarts_used": cert.restarts_used,
        "obstruction": None if cert.obstruction is None else str(cert.obstruction[0]),
    }
    if cert.status == "certified":
        payload["alpha"] = cert.alpha.tolist()
        payload["beta"] = cert.beta.tolist()
    lines = [f"equivalence: {cert.status}"]
    if cert.status == "certified":
        lines.append(f"residual {_fmt(cert.residual)} after {cert.restarts_used} restarts")
    elif cert.obstruction is not None:
        lines.append(f"separated by invariant {cert.obstruction[0]}")
    _emit(args, payload, lines)
    return {"certified": 0, "obstructed": 1}.get(cert.status, 3)


def _cmd_einstein(args) -> int:
    j, _ = _load(args.jmap)
    rep = einstein_check(j, tol=args.tol if args.tol is not None else 1e-9)
    payload = {
        "einstein": rep.passed,
        "condition_i_residual": rep.condition_i_residual,
        "condition_ii_residual": rep.condition_ii_residual,
        "scalar_coefficient": rep.scalar_coefficient,
        "ricci_eigen_spread": rep.ricci_eigen_spread,
    }
    lines = [
        f"einstein: {rep.passed}",
        f"condition residuals ({_fmt(rep.condition_i_residual)}, {_fmt(rep.condition_ii_residual)})",
        f"ricci eigenvalue spread {_fmt(rep.ricci_eigen_spread)}",
    ]
    _emit(args, payload, lines)
    return 0 if rep.passed else 1


def _cmd_scalar_n(args) -> int:
    j, _ = _load(args.jmap)
    r = args.r if args.r is not None else 1.0
    verdict = constant_scalar_verdict(j)
    vals = nil_sphere_samples(j, r=r, samples=100, seed=args.seed)
    payload = {
        "constant": verdict,
        "r": r,
        "min": float(np.min(vals)),
        "max": float(np.max(vals)),
        "std": float(np.std(vals)),
    }
    lines = [
        f"constant scalar curvature: {verdict}",
        f"sampled on the sphere of radius {_fmt(r)}: "
        f"min {_fmt(payload['min'])}, max {_fmt(payload['max'])}, std {_fmt(payload['std'])}",
    ]
    _emit(args, payload, lines)
    return 0 if verdict else 1


def _cmd_submanifold(args) -> int:
    j, _ = _load(args.jmap)
    c = args.c
    r = args.r if args.r is not None else 1.0
    t1 = args.t1 if args.t1 is not None else 1.0
    t2 = args.t2 if args.t2 is not None else 4.0
    res = max_sectional_submanifold(
        j, c, r, (t1, t2),
        restarts=args.restarts if args.restarts is not None else 16,
        seed=args.seed,
    )
    payload = {
        "max_sectional": res.value,
        "negative": res.value < 0.0,
        "c": c, "r": r, "t_range": [t1, t2],
        "witness": {
            "t": res.point.t,
            "x_dir": [float(x) for x in res.point.x_dir],
            "u": [float(x) for x in res.u],
            "v": [float(x) for x in res.v],
        },
    }
    lines = [
        f"max K over the hypersurface family = {_fmt(res.value)}",
        f"attained at t = {_fmt(res.point.t)}",
        "strictly negatively curved: %s" % (res.value < 0.0),
    ]
    if args.csv_out:
        grid = list(np.linspace(t1, t2, 9))
        rows = scalar_profile(j, c, r, grid, n_dirs=16, seed=args.seed)
        with open(args.csv_out, "w") as fh:
            fh.write(profile_csv(rows))
        lines.append(f"scalar profile written to {args.csv_out}")
    _emit(args, payload, lines)
    return 0 if res.value < 0.0 else 1


def _cmd_lambda(args) -> int:
    j, _ = _load(args.jmap)
    sub = any(x is not None for x in (args.r, args.t1, args.t2))
    if sub:
        r = args.r if args.r is not None else 1.0
        t1 = args.t1 if args.t1 is not None else 1.0
        t2 = args.t2 if args.t2 is not None else 4.0
        rep = lambda_submanifold(
            j, r, (t1, t2),
            tol_c=args.tol if args.tol is not None else 1e-3,
            restarts=args.restarts if args.restarts is not None else 8,
            seed=args.seed,
        )
        payload = {
            "lambda": rep.estimate,
            "bracket": [rep.c_low, rep.c_high],
            "r": r, "t_range": [t1, t2],
            "evaluations": len(rep.evaluations),
        }
        lines = [f"hypersurface threshold = {_fmt(rep.estimate)} "
                 f"in ({_fmt(rep.c_low)}, {_fmt(rep.c_high)})"]
    else:
        rep = lambda_bisect(
            j,
            tol_c=args.tol if args.tol is not None else 1e-3,
            restarts=args.restarts if args.restarts is not None else 32,
            seed=args.seed,
        )
        payload = {
            "lambda": rep.estimate,
            "bracket": [rep.c_low, rep.c_high],
            "evaluations": len(rep.evaluations),
        }
        lines = [f"threshold = {_fmt(rep.estimate)} "
                 f"in ({_fmt(rep.c_low)}, {_fmt(rep.c_high)})"]
    _emit(args, payload, lines)
    return 0


def _cmd_family_scan(args) -> int:
    members = []
    for item in args.members:
        tag, sep, spec = item.partition("=")
        if not sep:
            raise ValidationError(f"family member '{item}' is not TAG=JMAP")
        try:
            tval = float(tag)
        except ValueError:
            raise ValidationError(f"family tag '{tag}' is not a number") from None
        members.append((tval, _load(spec)[0]))
    rows = family_scan(
        members,
        tol_c=args.tol if args.tol is not None else 1e-4,
        restarts=args.restarts if args.restarts is not None else 32,
        seed=args.seed,
        force=args.force,
    )
    payload = family_json(rows)
    lines = [
        f"t={row.tag:g}: lambda={_fmt(row.report.estimate)} "
        f"in ({_fmt(row.report.c_low)}, {_fmt(row.report.c_high)})"
        for row in rows
    ]
    if args.csv_out:
        with open(args.csv_out, "w") as fh:
            fh.write(family_csv(rows))
        lines.append(f"scan written to {args.csv_out}")
    _emit(args, payload, lines)
    return 0


def _cmd_catalog(args) -> int:
    if not args.name:
        payload = {"names": list(catalog_names())}
        _emit(args, payload, list(catalog_names()))
        return 0
    entry = catalog_build(args.name)
    payload = {
        "name": entry.name,
        "m": entry.jmap.m,
        "k": entry.jmap.k,
        "construction": entry.provenance,
        "claims": [
            {"id": cid, "expected": exp, "tolerance": tol}
            for cid, exp, tol in entry.expected_claims
        ],
    }
    lines = [
        f"{entry.name}: m={entry.jmap.m}, k={entry.jmap.k}",
        f"construction: {entry.provenance}",
    ] + [f"  claim {cid}: {exp} (tol {tol:g})" for cid, exp, tol in entry.expected_claims]
    _emit(args, payload, lines)
    return 0


def _cmd_report(args) -> int:
    results = full_report(
        restarts=args.restarts if args.restarts is not None else 64,
        seed=args.seed,
    )
    payload = report_payload(results)
    _emit(args, payload, report_lines(results))
    return 0 if payload["passed"] else 1


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c", type=float, default=1.0, help="ambient scaling")
    common.add_argument("--r", type=float, default=None, help="sphere radius")
    common.add_argument("--t1", type=float, default=None, help="profile range start")
    common.add_argument("--t2", type=float, default=None, help="profile range end")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--restarts", type=int, default=None, help="search restarts")
    common.add_argument("--seed", type=int, default=None, help="search seed")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--csv-out", default=None, help="write CSV rows to this path")

    parser = argparse.ArgumentParser(prog="solvgeo", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a j-map")
    p.add_argument("jmap")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("curvature", parents=[common], help="curvature summary of g(j, c)")
    p.add_argument("jmap")
    p.set_defaults(func=_cmd_curvature)

    p = sub.add_parser("isospectral", parents=[common], help="compare operator spectra")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=_cmd_isospectral)

    p = sub.add_parser("equivalent", parents=[common], help="orthogonal equivalence search")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=_cmd_equivalent)

    p = sub.add_parser("einstein", parents=[common], help="Einstein conditions of G(j, 1)")
    p.add_argument("jmap")
    p.set_defaults(func=_cmd_einstein)

    p = sub.add_parser("scalar-n", parents=[common],
                       help="scalar curvature over the unit sphere bundle")
    p.add_argument("jmap")
    p.set_defaults(func=_cmd_scalar_n)

    p = sub.add_parser("submanifold", parents=[common],
                       help="curvature maximum of the invariant hypersurfaces")
    p.add_argument("jmap")
    p.set_defaults(func=_cmd_submanifold)

    p = sub.add_parser("lambda", parents=[common],
                       help="negative-curvature threshold (hypersurface variant "
                            "when --r/--t1/--t2 are present)")
    p.add_argument("jmap")
    p.set_defaults(func=_cmd_lambda)

    p = sub.add_parser("family-scan", parents=[common],
                       help="per-member thresholds of an isospectral family")
    p.add_argument("members", nargs="+", metavar="TAG=JMAP")
    p.add_argument("--force", action="store_true",
                   help="scan even when the family fails the isospectrality gate")
    p.set_defaults(func=_cmd_family_scan)

    p = sub.add_parser("catalog", parents=[common], help="list built-in examples")
    p.add_argument("name", nargs="?", default=None)
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("report", parents=[common], help="run the full acceptance gate")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    if args.seed is None:
        try:
            args.seed = int(os.environ.get("SOLVGEO_SEED", "0"))
        except ValueError:
            print("error: SOLVGEO_SEED must be an integer", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
