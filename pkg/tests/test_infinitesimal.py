import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from earthquake_lab.corpus import band_fixture, example1_limit
from earthquake_lab.hyp_core import disk_from_h, hp
from earthquake_lab.infinitesimal import decay_constants, dot_E, fd_check, tail_report
from earthquake_lab.laminations import EMPTY, DiscreteLamination, thurston_norm

from strategies import laminations

BASE = disk_from_h(-1 + 1j)


def test_single_leaf_field_in_half_plane_chart():
    # unit translation along (0, inf) moves x > 0 with speed x and fixes x < 0
    lam = example1_limit()
    assert dot_E(lam, hp(2.0), BASE) == pytest.approx(2.0, rel=1e-12)
    assert dot_E(lam, hp(-2.0), BASE) == 0.0


def test_empty_field_vanishes():
    assert dot_E(EMPTY, 1.0) == 0.0


@settings(max_examples=30, deadline=None)
@given(laminations(max_leaves=8), st.floats(0.0, 2 * math.pi, exclude_max=True), st.floats(0.1, 5.0))
def test_field_is_linear_in_the_measure(lam, theta, c):
    assert dot_E(lam.scaled(c), theta) == pytest.approx(c * dot_E(lam, theta), rel=1e-12, abs=1e-15)


@settings(max_examples=15, deadline=None)
@given(laminations(max_leaves=8), st.floats(0.0, 2 * math.pi, exclude_max=True))
def test_finite_differences_are_first_order(lam, theta):
    r = fd_check(lam, theta)
    assert r["rows"][-1]["discrepancy"] < 1e-3
    if r["slope"] is not None:
        assert abs(r["slope"] - 1.0) <= 0.2


def test_band_field_matches_fine_discretisation():
    band = band_fixture()
    t = (np.arange(2000) + 0.5) / 2000
    fine = DiscreteLamination(0.2 + t, 3.0 - 0.6 * t, np.full(2000, 1 / 2000), validate=False)
    for theta in (0.5, 1.0, 2.0, 4.0):
        assert dot_E(band, theta) == pytest.approx(dot_E(fine, theta), abs=1e-4)


def test_decay_constants_closed_form():
    c = decay_constants(0j)
    D0 = c["D0"]
    C1 = 8 * math.exp(D0) * math.cosh(D0 + 1)
    assert c["C1"] == pytest.approx(C1)
    assert c["C2"] == pytest.approx(C1 / (1 - math.exp(-1)))


def test_band_tail_decays_under_bound():
    band = band_fixture()
    th = thurston_norm(band).lower
    for d in range(0, 11, 2):
        r = tail_report(band, 1.5, 0j, d, th)
        assert r.ok and r.measured_tail <= r.analytic_bound
    with pytest.raises(ValueError):
        tail_report(band, 1.5, 0j, -1)
