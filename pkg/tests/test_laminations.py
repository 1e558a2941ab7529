import math

import numpy as np
import pytest
from hypothesis import given, settings

from earthquake_lab.approx import _split
from earthquake_lab.boxes import LOG2, GeodesicBox
from earthquake_lab.bruteforce import box_sup_bruteforce, pair_data, thurston_bruteforce
from earthquake_lab.corpus import band_fixture, band_with_atoms, discrete_corpus, ell, example1, example1_limit
from earthquake_lab.errors import CrossingLeaves
from earthquake_lab.hyp_core import Geodesic
from earthquake_lab.laminations import (
    EMPTY,
    DiscreteLamination,
    SumLamination,
    box_sup,
    comparison_constants,
    thurston_norm,
)

from strategies import laminations


def test_crossing_leaves_rejected():
    with pytest.raises(CrossingLeaves):
        DiscreteLamination([0.0, 1.0], [2.0, 3.0], [1.0, 1.0])


def test_nested_leaves_accepted():
    lam = DiscreteLamination([0.0, 0.5], [3.0, 2.0], [1.0, 2.0])
    assert lam.total_mass() == 3.0


def test_single_leaf_norms():
    lam = DiscreteLamination.delta(Geodesic.d(0.3, 2.0), 1.7)
    th = thurston_norm(lam)
    assert th.exact and th.lower == th.upper == 1.7
    assert box_sup(lam).value == 1.7


def test_empty_lamination_norms_vanish():
    assert thurston_norm(EMPTY).upper == 0.0
    assert box_sup(EMPTY).value == 0.0
    assert EMPTY.total_mass() == 0.0


def test_example1_boxes_hold_both_leaves():
    for n in (1, 10, 100):
        Q = GeodesicBox.h(math.inf, -math.e / n, 0.0, math.e / n)
        assert Q.contains_geodesic(ell(n))
        assert example1_limit().box_mass(Q) == 1.0 and example1(n).box_mass(Q) == 1.0


def test_close_pair_adds_up():
    # three leaves: two nested ones close together, one far away
    lam = DiscreteLamination([0.1, 0.2, 3.0], [2.0, 1.9, 4.0], [1.0, 2.0, 0.5])
    assert thurston_norm(lam).lower == 3.0
    assert box_sup(lam).value == 3.0


def test_box_sup_can_exceed_thurston_norm():
    # two unit leaves 1.5 apart: no unit segment meets both, one log-2 box holds both
    lam = DiscreteLamination.from_leaves([(Geodesic.h(-1.0, 1.0), 1.0), (Geodesic.h(-math.exp(1.5), math.exp(1.5)), 1.0)])
    th = thurston_norm(lam)
    assert th.exact and th.lower == 1.0
    assert box_sup(lam).value == 2.0
    assert box_sup(lam).value <= comparison_constants()["K"] * th.lower


def test_constants():
    c = comparison_constants()
    assert c["C0"] == 1 and c["K"] == 2
    assert c["log2_reach"] == pytest.approx(2 * math.acosh(math.sqrt(2)))


@pytest.mark.parametrize("name,lam", discrete_corpus(seed=3, count=6, max_leaves=8)[:10])
def test_exact_tables_inside_bruteforce_intervals(name, lam):
    data = pair_data(lam)
    tl, tu = thurston_bruteforce(lam, data=data)
    bl, bu = box_sup_bruteforce(lam, data=data)
    assert tl - 1e-12 <= thurston_norm(lam).lower <= tu + 1e-12
    assert bl - 1e-12 <= box_sup(lam).value <= bu + 1e-12


@settings(max_examples=25, deadline=None)
@given(laminations(max_leaves=10))
def test_box_sup_thurston_comparison(lam):
    th, bs = thurston_norm(lam), box_sup(lam).value
    c = comparison_constants()
    assert th.lower <= c["C0"] * bs + 1e-12
    assert bs <= c["K"] * th.lower + 1e-12
    assert bs <= lam.total_mass() + 1e-12


@settings(max_examples=25, deadline=None)
@given(laminations(max_leaves=10))
def test_scaling_is_linear(lam):
    assert thurston_norm(lam.scaled(2.5)).lower == pytest.approx(2.5 * thurston_norm(lam).lower)


def test_band_box_mass_closed_form():
    band = band_fixture()
    # alpha in [0.4, 0.7] and beta in [2.7, 2.88] both mean t in [0.2, 0.5]
    assert band.box_mass(GeodesicBox.d_(0.4, 0.7, 2.7, 2.88)) == pytest.approx(0.3, abs=1e-10)
    assert band.total_mass() == pytest.approx(1.0)


def test_band_box_mass_is_additive_under_splits():
    band = band_fixture()
    W = band.support_window()
    cells = [W]
    for _ in range(5):
        cells = [h for B in cells for h in _split(B)]
    assert sum(band.box_mass(B) for B in cells) == pytest.approx(band.box_mass(W), abs=1e-12)


def test_band_thurston_interval_brackets_fine_discretisation():
    band = band_fixture()
    th = thurston_norm(band)
    t = (np.arange(400) + 0.5) / 400
    fine = DiscreteLamination(0.2 + t, 3.0 - 0.6 * t, np.full(400, 1 / 400), validate=False)
    approx = thurston_norm(fine).lower
    assert th.lower - 5e-3 <= approx <= th.upper + 5e-3
    assert th.lower <= th.upper


def test_sum_lamination_masses():
    lam = band_with_atoms()
    assert isinstance(lam, SumLamination)
    assert lam.total_mass() == pytest.approx(1.75)
    assert len(lam.atomic_part()) == 2
    assert lam.continuous_part().total_mass() == pytest.approx(1.0)


def test_box_sup_reach_is_log_omega0():
    from earthquake_lab.boxes import OMEGA0

    assert comparison_constants()["log2_reach"] == pytest.approx(math.log(OMEGA0))
    assert LOG2 < math.log(OMEGA0)
