import math

import numpy as np
import pytest
from hypothesis import given, settings

from earthquake_lab.corpus import example1, example1_limit
from earthquake_lab.earthquake import (
    CircleMap,
    PiecewiseMobius,
    build_earthquake,
    earthquake_path,
    extract_measure,
)
from earthquake_lab.errors import BasePointOnLeaf
from earthquake_lab.experiments import elementary_distortion
from earthquake_lab.hyp_core import cayley, cayley_inv, disk_from_h, hp, metric_circle_angles
from earthquake_lab.laminations import EMPTY, DiscreteLamination

from strategies import laminations

BASE = disk_from_h(-1 + 1j)


def _circle_err(x, y):
    return np.max(np.abs(np.angle(np.exp(1j * (np.asarray(x) - np.asarray(y))))))


def test_empty_lamination_gives_identity():
    E = build_earthquake(EMPTY)
    t = np.linspace(0, 2 * np.pi, 50, endpoint=False)
    assert _circle_err(E.eval_angles(t), t) == 0.0
    assert len(extract_measure(E.as_table())) == 0


@pytest.mark.parametrize("n", [1, 10, 100])
def test_single_leaf_translates_far_side(n):
    # leaf (1/n, inf) with the base on the left: the right side moves by x -> 1/n + e (x - 1/n)
    E = build_earthquake(example1(n), BASE)
    for x in (0.5, 2.0, 7.0):
        if x > 1 / n:
            assert cayley_inv(E.eval_angles(cayley(x))) == pytest.approx(1 / n + math.e * (x - 1 / n), rel=1e-12)
    assert cayley_inv(E.eval_angles(cayley(-3.0))) == pytest.approx(-3.0, rel=1e-12)


@pytest.mark.parametrize("n", [1, 10, 100, 1000])
def test_elementary_distortion_closed_form(n):
    assert elementary_distortion(n) == pytest.approx(math.log(math.e + 1) - 1, abs=1e-9)


def test_base_point_on_leaf_rejected():
    with pytest.raises(BasePointOnLeaf):
        build_earthquake(example1_limit(), disk_from_h(1j))


@settings(max_examples=40, deadline=None)
@given(laminations(max_leaves=15))
def test_round_trip_and_comparison_law(lam):
    E = build_earthquake(lam)
    got = extract_measure(E.as_table())
    assert len(got) == len(lam)
    assert got.total_mass() == pytest.approx(lam.total_mass(), rel=1e-9)
    for row in E.comparison_law():
        assert row["left"] and row["axis_err"] < 1e-8 and row["length_err"] < 1e-9


@settings(max_examples=40, deadline=None)
@given(laminations(max_leaves=15))
def test_boundary_map_is_monotone_and_invertible(lam):
    E = build_earthquake(lam)
    assert CircleMap.from_earthquake(E).is_monotone(2000)
    table = E.as_table()
    t = np.linspace(0, 2 * np.pi, 500, endpoint=False)
    assert _circle_err(table.inverse()(table(t)), t) < 1e-9


@settings(max_examples=20, deadline=None)
@given(laminations(max_leaves=10))
def test_table_serialises(lam):
    table = build_earthquake(lam).as_table()
    again = PiecewiseMobius.from_dict(table.to_dict())
    t = np.linspace(0, 2 * np.pi, 100, endpoint=False)
    assert _circle_err(again(t), table(t)) < 1e-12


def test_path_at_zero_is_identity():
    lam = DiscreteLamination([0.1, 2.0], [1.0, 4.0], [1.0, 2.0])
    t = np.linspace(0, 2 * np.pi, 40, endpoint=False)
    assert _circle_err(earthquake_path(lam, 0.0).eval_angles(t), t) < 1e-15
    with pytest.raises(ValueError):
        earthquake_path(lam, -1.0)


def test_boundary_point_chart_is_kept():
    E = build_earthquake(example1(2), BASE)
    p = E.eval_boundary(hp(2.0))
    assert p.chart == "H"
    assert metric_circle_angles(p.angle, cayley(0.5 + math.e * 1.5)) < 1e-12
