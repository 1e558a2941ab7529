import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from earthquake_lab.errors import DegenerateTriple
from earthquake_lab.hyp_core import (
    TWO_PI,
    Geodesic,
    act,
    cayley,
    cayley_inv,
    dp,
    hp,
    hyperbolic_distance,
    hyperbolic_translation,
    inverse,
    metric_circle_angles,
    mobius_from_triples,
    same_map,
    translation_length_axis,
    wrap,
)

from strategies import angles, distinct_angles, mobius_maps


def test_cayley_fixed_values():
    assert cayley(math.inf) == 0.0
    assert cayley(0.0) == pytest.approx(math.pi)
    assert cayley(1.0) == pytest.approx(1.5 * math.pi)
    assert cayley(-1.0) == pytest.approx(0.5 * math.pi)
    assert cayley_inv(0.0) == math.inf


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_cayley_round_trip(x):
    assert cayley_inv(cayley(x)) == pytest.approx(x, rel=1e-9, abs=1e-9)


@given(angles)
def test_point_chart_round_trip(t):
    p = dp(t)
    assert wrap(p.to("H").to("D").angle) == pytest.approx(t, abs=1e-9) or abs(t - TWO_PI) < 1e-9


def test_wrap_keeps_extended_precision():
    t = wrap(np.array([-1.0, 7.0], dtype=np.longdouble))
    assert t.dtype == np.longdouble
    assert abs(t[0] - (8 * np.arctan(np.longdouble(1)) - 1)) < 1e-18
    assert wrap(-1e-17) == 0.0


@given(distinct_angles(3), distinct_angles(3))
def test_mobius_from_triples_hits_targets(src, dst):
    M = mobius_from_triples(src, dst)
    got = act(M, np.array(src))
    err = np.abs(np.angle(np.exp(1j * (got - np.array(dst)))))
    assert np.max(err) < 1e-7
    assert abs(np.linalg.det(M) - 1) < 1e-9


def test_mobius_from_triples_rejects_repeats():
    with pytest.raises(DegenerateTriple):
        mobius_from_triples((0.1, 0.1, 2.0), (0.0, 1.0, 2.0))


@given(mobius_maps())
def test_inverse_composes_to_identity(M):
    assert same_map(M @ inverse(M), np.eye(2))


@given(st.floats(0.05, 8.0), angles, st.floats(0.1, 3.0))
def test_translation_length_and_axis(length, a, gap):
    g = Geodesic.d(a, wrap(a + gap))
    T = hyperbolic_translation(g, length)
    L, axis = translation_length_axis(T)
    assert L == pytest.approx(length, rel=1e-8)
    assert metric_circle_angles(axis.alpha, g.alpha) < 1e-7
    assert metric_circle_angles(axis.beta, g.beta) < 1e-7


def test_translation_direction():
    # along (0, inf) by 1: x -> e x
    T = hyperbolic_translation(Geodesic.h(0.0, math.inf), 1.0)
    assert cayley_inv(act(T, cayley(2.0))) == pytest.approx(2.0 * math.e)


def _mp_distance(a1, b1, a2, b2):
    """Distance between disjoint half-plane geodesics from the cross ratio (mpmath)."""
    a1, b1, a2, b2 = map(mpmath.mpf, (a1, b1, a2, b2))
    cr = (a1 - a2) * (b1 - b2) / ((a1 - b2) * (b1 - a2))
    # for nested or separated pairs |cr| = tanh^2(d/2) or its reciprocal
    t = mpmath.sqrt(abs(cr))
    t = min(t, 1 / t)
    return float(2 * mpmath.atanh(t))


@pytest.mark.parametrize("pair", [((-1, 1), (-math.e, math.e)), ((1, 2), (-1, -2)), ((0.5, 3.0), (5.0, 9.0))])
def test_hyperbolic_distance_against_mpmath(pair):
    (a1, b1), (a2, b2) = pair
    d = hyperbolic_distance(Geodesic.h(a1, b1), Geodesic.h(a2, b2))
    assert d == pytest.approx(_mp_distance(a1, b1, a2, b2), rel=1e-10)


def test_concentric_geodesics_distance_is_log_ratio():
    assert hyperbolic_distance(Geodesic.h(-1, 1), Geodesic.h(-math.e, math.e)) == pytest.approx(1.0, rel=1e-12)


@settings(max_examples=50)
@given(mobius_maps(), st.floats(0.1, 3.0), angles, angles)
def test_distance_is_mobius_invariant(M, gap, a, b):
    g = Geodesic.d(a, wrap(a + gap))
    h = Geodesic.d(wrap(a + gap + 0.5), wrap(a + gap + 0.5 + min(gap, 1.5)))
    d0 = hyperbolic_distance(g, h)
    d1 = hyperbolic_distance(Geodesic.d(*act(M, np.array([g.alpha, g.beta]))),
                             Geodesic.d(*act(M, np.array([h.alpha, h.beta]))))
    assert d1 == pytest.approx(d0, rel=1e-6, abs=1e-8)
