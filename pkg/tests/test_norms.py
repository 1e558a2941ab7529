import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from earthquake_lab.boxes import CENTER_STAR, LOG2, Q_STAR
from earthquake_lab.errors import BadExponent, NonFinite
from earthquake_lab.hyp_core import Geodesic, act
from earthquake_lab.infinitesimal import dot_E
from earthquake_lab.laminations import EMPTY, DiscreteLamination
from earthquake_lab import norms
from earthquake_lab.norms import (
    BUMP,
    CONE,
    CircleVectorField,
    audit_test_function,
    covering_maps,
    crossratio_norm,
    field_on_box,
    frechet_norm,
    holder_bound,
    holder_norm,
    box_frechet_constant,
    profile_scale,
    qs_constant,
    qs_distortion,
    trapezoid,
    weak_pairing,
    zygmund_norm,
)
from earthquake_lab.search import SearchBudget

from strategies import laminations, mobius_maps

SMALL = SearchBudget(n_s=9, n_grid=8, n_refine=2, refine_iters=60)


def test_profiles_at_reference_centre():
    assert float(BUMP(CENTER_STAR.alpha, CENTER_STAR.beta)) == 1.0
    assert float(CONE(CENTER_STAR.alpha, CENTER_STAR.beta)) == pytest.approx(math.pi / 4)
    # the bump vanishes off Q* = [3pi/2, 0] x [pi/2, pi]
    assert float(BUMP(1.0, 4.0)) == 0.0
    assert float(BUMP(0.5 * math.pi + 0.1, 1.5 * math.pi + 0.1)) > 0.0


@pytest.mark.parametrize("nu", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("profile", [BUMP, CONE])
def test_scaled_profiles_are_test_functions(profile, nu):
    assert audit_test_function(norms.TestFunction.make(profile, nu)) <= 1.0 + 1e-8


@pytest.mark.parametrize("nu", [0.1, 0.5, 1.0])
def test_scaled_cone_peak_is_at_least_two_over_pi(nu):
    assert profile_scale(CONE, nu) * math.pi / 4 >= 2 / math.pi


def test_bad_exponent():
    for nu in (0.0, -0.5, 1.5, math.nan):
        with pytest.raises(BadExponent):
            profile_scale(BUMP, nu)


@settings(max_examples=40)
@given(st.floats(0.01, 10), st.floats(0.01, 100), st.floats(0.05, 1.0))
def test_holder_bound_dominates_samples(sup, lip, nu):
    assert holder_bound(sup, lip, nu) >= sup


def test_trapezoid_sampled_norm_under_bound():
    r = holder_norm(trapezoid(0.1), 0.5)
    assert r.lower <= r.upper + 1e-12


def test_frechet_of_single_leaf():
    lam = DiscreteLamination.delta(CENTER_STAR)
    r = frechet_norm(lam, None, 1.0, SMALL)
    # the scaled cone pairs to pi/4 on its own centre; the norm is at most the box sup
    assert math.pi / 4 - 1e-9 <= r.lower <= r.upper + 1e-12
    assert r.upper == pytest.approx(1.0)


@settings(max_examples=5, deadline=None)
@given(laminations(max_leaves=4))
def test_frechet_of_zero_difference(lam):
    r = frechet_norm(lam, lam, 0.5, SMALL)
    assert r.lower == 0.0


def test_weak_pairing_of_identical_measures():
    lam = DiscreteLamination.delta(Geodesic.d(0.2, 2.5))
    assert weak_pairing(lam, lam, BUMP) == 0.0
    assert weak_pairing(lam, EMPTY, BUMP) == float(BUMP(0.2, 2.5))


def test_covering_constant():
    assert len(covering_maps()) == 6
    assert box_frechet_constant(1.0) == pytest.approx(6 * 12 / math.pi)
    assert box_frechet_constant(0.5) == pytest.approx(6 * math.sqrt(math.pi / 2) * 12 / math.pi)


@pytest.mark.parametrize("coef", [[1.0], [0.0, 1.0], [0.0, 0.0, 1.0], [2.0, -1.0, 3.0]])
def test_quadratic_fields_have_zero_norms(coef):
    V = CircleVectorField.h_polynomial(coef)
    seen = []
    crossratio_norm(V, SMALL, record=seen)
    assert max(seen) <= 1e-9
    assert zygmund_norm(V)["value"] <= 1e-9


@settings(max_examples=10, deadline=None)
@given(mobius_maps(), st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_quadratic_fields_stay_quadratic_under_mobius(M, coef):
    V = CircleVectorField.h_polynomial(coef).pushforward(M)
    Q = Q_STAR.image(np.array([[1.0, 0.3], [0.2, 1.06]]))
    assert abs(field_on_box(V, Q)) <= 1e-8 * (1 + sum(abs(c) for c in coef)) * np.max(np.abs(M)) ** 4


def test_corner_field_zygmund_value():
    # |theta - pi| has second difference 2 at its corner
    V = CircleVectorField(lambda t: np.abs(np.mod(t, 2 * np.pi) - np.pi), "corner")
    z = zygmund_norm(V)
    assert z["raw"] == pytest.approx(2.0, abs=1e-12)
    assert 1.9 <= z["value"] <= 2.0 + 1e-12


@settings(max_examples=10, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_zygmund_ignores_quadratic_part(coef):
    V = CircleVectorField(lambda t: np.abs(np.mod(t, 2 * np.pi) - np.pi), "corner")
    W = V + CircleVectorField.h_polynomial(coef)
    assert zygmund_norm(W)["value"] == pytest.approx(zygmund_norm(V)["value"], abs=1e-7)


def test_non_finite_fields_are_rejected():
    V = CircleVectorField(lambda t: np.full(np.shape(t), np.nan), "nan")
    with pytest.raises(NonFinite):
        zygmund_norm(V)


@settings(max_examples=10, deadline=None)
@given(laminations(max_leaves=6), st.floats(0.0, 2 * math.pi, exclude_max=True))
def test_field_of_lamination_matches_dot_E(lam, theta):
    V = CircleVectorField.from_lamination(lam)
    assert float(V.angular(np.array([theta]))[0]) == pytest.approx(dot_E(lam, theta), rel=1e-12, abs=1e-14)


def test_rotation_distortion():
    assert qs_constant(lambda t: np.asarray(t) + 0.7) == pytest.approx(1.0, abs=1e-9)
    assert qs_distortion(lambda t: np.asarray(t) + 0.7, SMALL).value <= 1e-9


def test_non_mobius_map_distorts():
    h = lambda t: np.asarray(t) + 0.4 * np.sin(np.asarray(t))  # noqa: E731
    assert qs_distortion(h, SMALL).value > 1e-2
    assert qs_constant(h) > 1.1


@settings(max_examples=5, deadline=None)
@given(mobius_maps())
def test_mobius_maps_preserve_log2_boxes(M):
    assert qs_distortion(lambda t: act(M, t), SMALL).value <= 1e-9
    assert LOG2 > 0
