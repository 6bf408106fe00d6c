"""Built-in example j-maps and their expected properties.

Quaternion multiplication fixes all sign conventions here.  In the basis
(1, i, j, k), left multiplication by the imaginary units is

    L_i = [[0,-1, 0, 0],   L_j = [[0, 0,-1, 0],   L_k = [[0, 0, 0,-1],
           [1, 0, 0, 0],          [0, 0, 0, 1],          [0, 0,-1, 0],
           [0, 0, 0,-1],          [1, 0, 0, 0],          [0, 1, 0, 0],
           [0, 0, 1, 0]]          [0,-1, 0, 0]]          [1, 0, 0, 0]]

and right multiplication (q -> q*p) is R_i, R_j, R_k below.  Left and
right multiplications commute; both families are skew for imaginary p.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .lie_model import JMap, Lattice
from .linalg import ValidationError

__all__ = [
    "CatalogEntry",
    "catalog_build",
    "catalog_names",
    "ex26_cross",
    "ex26_quat",
    "heis",
    "qab",
    "square_lattice",
]

QL = {
    "i": np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float),
    "j": np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float),
    "k": np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float),
}

QR = {
    "i": np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float),
    "j": np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float),
    "k": np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], dtype=float),
}

_CROSS = {
    0: np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=float),
    1: np.array([[0, 0, 1], [0, 0, 0], [-1, 0, 0]], dtype=float),
    2: np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=float),
}

_LAMBDA_BALANCED = 1.0
_LAMBDA_ONESIDED = 2.0 / np.sqrt(7.0)
_LAMBDA_K1 = 1.0 / np.sqrt(2.0)


def qab(a: int, b: int) -> JMap:
    """k=3 family on a+b quaternion blocks: left multiplication on the
    first a blocks, right multiplication on the last b."""
    if a < 0 or b < 0 or a + b < 1:
        raise ValidationError(f"need non-negative a, b with a+b >= 1, got ({a}, {b})")
    m = 4 * (a + b)
    js = np.zeros((3, m, m))
    for axis, unit in enumerate("ijk"):
        blocks = [QL[unit]] * a + [QR[unit]] * b
        for pos, blk in enumerate(blocks):
            js[axis, 4 * pos:4 * pos + 4, 4 * pos:4 * pos + 4] = blk
    return JMap.create(js)


def ex26_cross() -> JMap:
    """Cross-product action on R^3 x R^3; z carries the (2/3)-scaled inner
    product so every frequency is sqrt(3/2)|z|."""
    js = np.zeros((3, 6, 6))
    for axis in range(3):
        js[axis, :3, :3] = _CROSS[axis]
        js[axis, 3:, 3:] = _CROSS[axis]
    return JMap.create(js, gram_z=(2.0 / 3.0) * np.eye(3))


def ex26_quat() -> JMap:
    """Left quaternion multiplication padded by a 2-dim common kernel;
    isospectral to ex26_cross but with a z-independent zero eigenspace."""
    js = np.zeros((3, 6, 6))
    for axis, unit in enumerate("ijk"):
        js[axis, :4, :4] = QL[unit]
    return JMap.create(js, gram_z=(2.0 / 3.0) * np.eye(3))


def heis(m: int, k: int = 1) -> JMap:
    """Single rotation generator: J_1 = m/2 plane rotations, k = 1."""
    if k != 1:
        raise ValidationError("heis is the k=1 entry; other k are not catalogued")
    if m < 2 or m % 2:
        raise ValidationError(f"m must be even and >= 2, got {m}")
    j1 = np.zeros((m, m))
    for p in range(0, m, 2):
        j1[p, p + 1] = -1.0
        j1[p + 1, p] = 1.0
    return JMap.create(j1[np.newaxis])


def square_lattice(k: int, scale: float = 1.0) -> Lattice:
    return Lattice(basis=scale * np.eye(k))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    jmap: JMap
    provenance: str
    expected_claims: tuple  # of (claim_id, expected, tolerance)


def _qab_claims(a: int, b: int) -> tuple:
    claims = [
        ("is_heisenberg_type", True, 1e-9),
        ("skew_commutant_dim", a * (2 * a + 1) + b * (2 * b + 1), 0),
    ]
    if min(a, b) >= 1:
        claims.append(("lambda_bisect", _LAMBDA_BALANCED, 1e-3))
    else:
        claims.append(("lambda_bisect", _LAMBDA_ONESIDED, 1e-3))
    return tuple(claims)


_EX26_SPECTRUM = ("spectrum_at_e1", ((0.0, 2), (1.0, 2)), 1e-10)


def catalog_build(name: str) -> CatalogEntry:
    """Construct a named catalog entry.

    Accepted names: qab(a,b) with a+b >= 1, ex26_cross, ex26_quat,
    heis(m) or heis(m,1).
    """
    name = name.strip()
    if name == "ex26_cross":
        return CatalogEntry(
            name=name,
            jmap=ex26_cross(),
            provenance="doubled cross-product action on R^3 x R^3, scaled z metric",
            expected_claims=(
                _EX26_SPECTRUM,
                ("einstein_check", True, 1e-9),
                ("constant_scalar_verdict", True, 1e-9),
            ),
        )
    if name == "ex26_quat":
        return CatalogEntry(
            name=name,
            jmap=ex26_quat(),
            provenance="left quaternion multiplication with a fixed 2-dim kernel",
            expected_claims=(
                _EX26_SPECTRUM,
                ("einstein_check", False, 1e-9),
                ("constant_scalar_verdict", False, 1e-9),
            ),
        )
    match = re.fullmatch(r"qab\((\d+),(\d+)\)", name.replace(" ", ""))
    if match:
        a, b = int(match.group(1)), int(match.group(2))
        return CatalogEntry(
            name=f"qab({a},{b})",
            jmap=qab(a, b),
            provenance=f"quaternion multiplication family, {a} left and {b} right blocks",
            expected_claims=_qab_claims(a, b),
        )
    match = re.fullmatch(r"heis\((\d+)(?:,1)?\)", name.replace(" ", ""))
    if match:
        m = int(match.group(1))
        return CatalogEntry(
            name=f"heis({m},1)",
            jmap=heis(m),
            provenance="single rotation generator on m/2 planes",
            expected_claims=(
                ("is_heisenberg_type", True, 1e-9),
                ("lambda_bisect", _LAMBDA_K1, 1e-3),
            ),
        )
    raise ValidationError(
        f"unknown catalog name {name!r}; try qab(a,b), ex26_cross, ex26_quat, heis(m)"
    )


def catalog_names() -> tuple[str, ...]:
    return ("qab(1,0)", "qab(2,0)", "qab(1,1)", "qab(2,1)", "qab(3,0)",
            "ex26_cross", "ex26_quat", "heis(2,1)", "heis(6,1)")
