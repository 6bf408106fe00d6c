import numpy as np

from solvgeo.lie_model import JMap


def random_skew(rng, m):
    a = rng.standard_normal((m, m))
    return a - a.T


def random_spd(rng, n, spread=1.0):
    a = rng.standard_normal((n, n)) * spread
    return a @ a.T + n * np.eye(n)


def random_jmap(rng, m, k, identity_grams=True):
    """A valid j-map with skew operators, optionally with random grams."""
    if identity_grams:
        J = np.stack([random_skew(rng, m) for _ in range(k)])
        return JMap.create(J)
    gram_v = random_spd(rng, m, spread=0.3)
    gram_z = random_spd(rng, k, spread=0.3)
    # skew w.r.t. gram_v means gram_v J is skew-symmetric
    gv_inv = np.linalg.inv(gram_v)
    J = np.stack([gv_inv @ random_skew(rng, m) for _ in range(k)])
    return JMap.create(J, gram_v=gram_v, gram_z=gram_z)
