"""Shared hypothesis strategies."""

import numpy as np
from hypothesis import strategies as st

from earthquake_lab.corpus import random_lamination, random_mobius, random_windowed

angles = st.floats(0.0, 2 * np.pi, exclude_max=True, allow_nan=False)
seeds = st.integers(0, 2**32 - 1)


@st.composite
def laminations(draw, max_leaves=12):
    rng = np.random.default_rng(draw(seeds))
    return random_lamination(rng, draw(st.integers(1, max_leaves)))


@st.composite
def windowed(draw, max_leaves=8):
    rng = np.random.default_rng(draw(seeds))
    return random_windowed(rng, draw(st.integers(1, max_leaves)))


@st.composite
def mobius_maps(draw):
    return random_mobius(np.random.default_rng(draw(seeds)))


@st.composite
def distinct_angles(draw, k, gap=1e-3):
    """k angles in counterclockwise order, pairwise at least gap apart."""
    xs = sorted(draw(st.lists(angles, min_size=k, max_size=k)))
    ok = all(b - a > gap for a, b in zip(xs, xs[1:])) and xs[0] + 2 * np.pi - xs[-1] > gap
    from hypothesis import assume

    assume(ok)
    return xs
