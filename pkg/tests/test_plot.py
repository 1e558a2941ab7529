import math
import re

import numpy as np
import pytest

from earthquake_lab.boxes import GeodesicBox
from earthquake_lab.corpus import ell, example1, example1_limit, random_lamination
from earthquake_lab.earthquake import CircleMap, build_earthquake
from earthquake_lab.laminations import EMPTY, SumLamination
from earthquake_lab.norms import CircleVectorField
from earthquake_lab.plot import Figure, arc_points, geodesic_circle, geodesic_path, plot_lamination


def test_empty_plot_is_the_disk_outline():
    svg = plot_lamination(EMPTY)
    assert svg.count("<circle") == 1
    assert "<path" not in svg and "<line" not in svg


def test_fifty_leaves_stay_inside_the_disk():
    lam = random_lamination(np.random.default_rng(50), 50)
    for a, b in zip(lam.alpha, lam.beta):
        z = arc_points(a, b)
        assert np.max(np.abs(z)) <= 1 + 1e-12
        assert abs(z[0] - np.exp(1j * a)) < 1e-12 and abs(z[-1] - np.exp(1j * b)) < 1e-12


def test_arcs_meet_the_boundary_orthogonally():
    c, r = geodesic_circle(0.3, 2.0)
    # orthogonal circles: |c|^2 = 1 + r^2
    assert abs(c) ** 2 == pytest.approx(1 + r * r)
    assert geodesic_circle(0.0, math.pi) is None
    assert " L " in geodesic_path(0.0, math.pi)


def test_svg_is_deterministic():
    lam = random_lamination(np.random.default_rng(3), 20)
    assert plot_lamination(lam) == plot_lamination(lam)


def test_example1_arrangement():
    n = 4
    Q = GeodesicBox.h(math.inf, -math.e / n, 0.0, math.e / n)
    svg = plot_lamination(SumLamination([example1_limit(), example1(n)]), [Q], title="leaves and box")
    assert svg.count("<path") == 2 + 2
    assert "<title>leaves and box</title>" in svg


def test_map_and_field_layers():
    lam = example1(2)
    svg = (Figure().lamination(lam)
           .boundary_map(CircleMap.from_earthquake(build_earthquake(lam)), k=12)
           .field(CircleVectorField.from_lamination(lam), k=10).svg())
    assert svg.count("<line") == 22
    for x in map(float, re.findall(r'x\d="([-0-9.]+)"', svg)):
        assert -20 <= x <= 420
