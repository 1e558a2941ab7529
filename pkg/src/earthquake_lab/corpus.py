"""Fixed laminations used by the experiments and the test suite."""

import math

import numpy as np

from .hyp_core import TWO_PI, Geodesic
from .laminations import BandLamination, DiscreteLamination, SumLamination

BAND_SPEC = {
    "alpha": {"family": "affine", "coef": [0.2, 1.0]},
    "beta": {"family": "affine", "coef": [3.0, -0.6]},
    "rho": {"family": "polynomial", "coef": [1.0]},
}


def band_fixture():
    """Leaves (0.2 + t, 3.0 - 0.6 t), t in [0, 1], with unit density."""
    return BandLamination.from_specs(BAND_SPEC["alpha"], BAND_SPEC["beta"], BAND_SPEC["rho"])


def band_with_atoms():
    atoms = DiscreteLamination([0.1, 1.5], [3.1, 2.0], [0.5, 0.25])
    return SumLamination([band_fixture(), atoms])


ELL_INF = Geodesic.h(0.0, math.inf)


def ell(n):
    """The leaf (1/n, inf) of the half-plane; n may be negative."""
    return Geodesic.h(1.0 / n, math.inf)


def example1(n):
    return DiscreteLamination.delta(ell(n))


def example1_limit():
    return DiscreteLamination.delta(ELL_INF)


def example1_midpoint(n):
    return DiscreteLamination([ell(n).alpha, ell(-n).alpha], [ell(n).beta, ell(-n).beta], [0.5, 0.5])


def random_lamination(rng, n, w_range=(0.1, 2.0)):
    """n weighted leaves from a random non-crossing matching of 2n sorted angles."""
    ang = np.sort(rng.uniform(0.0, TWO_PI, 2 * n))
    pairs = []
    stack = [list(range(2 * n))]
    while stack:
        idx = stack.pop()
        if not idx:
            continue
        j = 2 * int(rng.integers(0, len(idx) // 2)) + 1
        pairs.append((idx[0], idx[j]))
        stack.append(idx[1:j])
        stack.append(idx[j + 1:])
    a = [ang[i] for i, _ in pairs]
    b = [ang[j] for _, j in pairs]
    return DiscreteLamination(a, b, rng.uniform(*w_range, n))


def random_windowed(rng, n, w_range=(0.1, 2.0)):
    """n nested leaves running between two disjoint arcs (so the support has a window)."""
    s = rng.uniform(0.0, TWO_PI)
    l1, gap, l2 = rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5)
    x = np.sort(s + rng.uniform(0.0, l1, n))
    y = np.sort(s + l1 + gap + rng.uniform(0.0, l2, n))[::-1]
    return DiscreteLamination(x, y, rng.uniform(*w_range, n))


def random_mobius(rng, scale=2.0):
    """A random det-1 matrix with entries of moderate size."""
    while True:
        M = rng.normal(scale=scale, size=(2, 2))
        d = np.linalg.det(M)
        if abs(d) > 0.1:
            if d < 0:
                M[:, 0] *= -1
                d = -d
            return M / math.sqrt(d)


def discrete_corpus(seed=0, count=24, max_leaves=12):
    """Named discrete laminations: random, windowed and the fixed examples."""
    rng = np.random.default_rng(seed)
    out = [("example1-limit", example1_limit())]
    out += [(f"example1-{n}", example1(n)) for n in (2, 8, 32)]
    out += [(f"example1-midpoint-{n}", example1_midpoint(n)) for n in (2, 8)]
    for k in range(count):
        n = int(rng.integers(1, max_leaves + 1))
        out.append((f"random-{k}", random_lamination(rng, n)))
    for k in range(count // 2):
        n = int(rng.integers(1, max_leaves + 1))
        out.append((f"windowed-{k}", random_windowed(rng, n)))
    return out
