"""Compare the compiled plane-ascent kernel against the numpy fallback.

Runs the same seeded batch of starts through both implementations on a
real curvature tensor, reports wall-clock times and the worst value
disagreement.  Usage:

    python benchmarks/bench_ascent.py [--starts N] [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from solvgeo import _ascent_py
from solvgeo.catalog import qab
from solvgeo.curvature import solvable_curvature

try:
    from solvgeo import _ascent
except ImportError:
    _ascent = None


def _bench(impl, R, su, sv, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = impl.ascend(R, su.copy(), sv.copy(), max_iter=500, gtol=1e-12)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--starts", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    curv = solvable_curvature(qab(1, 1), 1.0)
    n = curv.n
    rng = np.random.default_rng(args.seed)
    su = rng.standard_normal((args.starts, n))
    sv = rng.standard_normal((args.starts, n))

    t_py, (vals_py, _, _) = _bench(_ascent_py, curv.R, su, sv, args.repeats)
    print(f"python   backend: {t_py * 1e3:8.2f} ms for {args.starts} starts (n={n})")

    if _ascent is None:
        print("compiled backend: not built (pip install -e . compiles it)")
        return 0

    t_c, (vals_c, _, _) = _bench(_ascent, curv.R, su, sv, args.repeats)
    print(f"compiled backend: {t_c * 1e3:8.2f} ms for {args.starts} starts (n={n})")
    gap = float(np.max(np.abs(np.sort(vals_py) - np.sort(vals_c))))
    print(f"speedup {t_py / t_c:.1f}x, worst sorted-value disagreement {gap:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
