import math

import numpy as np
import pytest

from earthquake_lab.bruteforce import leaf_points, sampled_distance, segment_mass
from earthquake_lab.hyp_core import Geodesic, distance_points, hyperbolic_distance
from earthquake_lab.laminations import DiscreteLamination


def test_leaf_points_are_unit_speed():
    s = np.linspace(-3, 3, 61)
    z = leaf_points(0.4, 2.9, s)
    steps = [distance_points(z[i], z[i + 1]) for i in range(len(z) - 1)]
    assert np.allclose(steps, 0.1, rtol=1e-9)


@pytest.mark.parametrize("g,h", [((0.1, 1.0), (2.0, 3.0)), ((0.1, 3.0), (0.5, 2.5)), ((1.0, 4.0), (4.5, 6.0))])
def test_sampled_distance_approaches_exact(g, h):
    g, h = Geodesic.d(*g), Geodesic.d(*h)
    d, P, Q = sampled_distance(g, h)
    exact = hyperbolic_distance(g, h)
    # sampling can only overestimate
    assert exact - 1e-12 <= d <= exact + 1e-5
    assert distance_points(P, Q) == pytest.approx(d, rel=1e-9)


def test_segment_mass_counts_crossings():
    lam = DiscreteLamination([0.1, 0.2, 3.0], [2.0, 1.9, 4.0], [1.0, 2.0, 0.5])
    # a diameter-like segment from near angle 1 to near angle 3.5 crosses the first two leaves only
    P, Q = 0.9 * np.exp(1j * 1.0), 0.9 * np.exp(1j * 2.5)
    assert segment_mass(lam, P, Q) == 3.0
    assert segment_mass(lam, 0j, 0.1 + 0j) == 0.0
    assert math.isfinite(segment_mass(lam, P, P))
