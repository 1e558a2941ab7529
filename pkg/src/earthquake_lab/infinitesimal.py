"""Infinitesimal earthquakes.

Tangent values are real.  On the circle a field is written as an angular
speed v(theta) (the disk field is i z v).  In the half-plane chart the
same field is V(x) = v (1 + x^2) / 2, which is the value reported for
finite half-plane inputs.  Disk-chart inputs get v itself.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .earthquake import earthquake_path, far_arcs
from .hyp_core import (
    TWO_PI,
    Geodesic,
    arc_offset,
    as_angle,
    distance_points,
    klein,
    metric_circle_angles,
    poincare_from_klein,
)
from .laminations import DiscreteLamination, _side, thurston_norm
from .quadrature import integrate


def arc_field(theta, a, b):
    """Angular speed at theta of the field (z-a)(z-b)/(a-b) on the arc a -> b, 0 off it."""
    theta = np.asarray(theta, dtype=float)
    inside = arc_offset(theta, a) < arc_offset(b, a)
    v = 2.0 * np.sin((theta - a) / 2) * np.sin((theta - b) / 2) / np.sin((a - b) / 2)
    return np.where(inside, v, 0.0)


def to_chart(v, z):
    """Convert an angular speed at the boundary point z to z's chart."""
    if z.chart == "D":
        return float(v)
    if z.is_inf:
        # chart w = -1/x near infinity, where dw/dtheta = 1/2
        return 0.5 * float(v)
    return float(v) * (1.0 + z.v * z.v) / 2.0


@dataclass
class LeafField:
    """The field of one leaf: nonzero on the arc a -> b away from the base stratum."""

    leaf: Geodesic
    a: float
    b: float

    @classmethod
    def of(cls, leaf, base_point):
        lam = DiscreteLamination.delta(leaf)
        a, b = far_arcs(lam, base_point)
        return cls(leaf, float(a[0]), float(b[0]))

    def angular(self, theta):
        return arc_field(theta, self.a, self.b)

    def __call__(self, z):
        return to_chart(self.angular(z.angle), z)


def e_tilde(z, leaf):
    """(z-a)(z-b)/(a-b) with (a, z, b) counterclockwise; 0 at the endpoints."""
    t = as_angle(z)
    p, q = leaf.alpha, leaf.beta
    if min(metric_circle_angles(t, p), metric_circle_angles(t, q)) <= 1e-15:
        return 0.0
    a, b = (p, q) if arc_offset(t, p) < arc_offset(q, p) else (q, p)
    v = 2.0 * math.sin((t - a) / 2) * math.sin((t - b) / 2) / math.sin((a - b) / 2)
    return to_chart(v, z) if hasattr(z, "chart") else v


def _angle_and_point(z):
    t = as_angle(z)
    return t, complex(math.cos(t), math.sin(t))


def ray_depths(alpha, beta, P, zeta):
    """Distance from P to where each chord (alpha, beta) meets the ray P -> zeta.

    The ray is straight in the Klein model.  Leaves that miss it get nan.
    """
    k0 = klein(complex(P))
    A = np.exp(1j * np.asarray(alpha, dtype=float))
    B = np.exp(1j * np.asarray(beta, dtype=float))
    d = zeta - k0
    e = B - A
    den = np.imag(np.conj(d) * e)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.imag(np.conj(A - k0) * e) / den
        r = np.imag(np.conj(A - k0) * d) / den
    hit = (s >= 0) & (s <= 1) & (r >= 0) & (r <= 1)
    X = k0 + s * d
    pts = poincare_from_klein(np.where(hit, X, 0))
    P = complex(P)
    with np.errstate(divide="ignore"):
        r = np.abs(pts - P) / np.abs(1 - np.conj(P) * pts)
        dist = 2.0 * np.arctanh(np.minimum(r, 1.0))
    return np.atleast_1d(np.where(hit, dist, np.nan))


def decay_constants(base_point):
    D0 = distance_points(0j, complex(base_point))
    C1 = 8.0 * math.exp(D0) * math.cosh(D0 + 1.0)
    C2 = C1 / (1.0 - math.exp(-1.0))
    return {"D0": D0, "C1": C1, "C2": C2,
            "C1_formula": "8 exp(D0) cosh(D0 + 1)",
            "C2_formula": "C1 / (1 - exp(-1)), the sum of exp(-n) over n >= 0 times C1"}


def dot_E(lam, z, base_point=0j, tol=1e-9, with_certificate=False):
    """Infinitesimal earthquake of lam at the boundary point z (in z's chart)."""
    theta, zeta = _angle_and_point(z)
    if lam.is_discrete:
        d = lam if isinstance(lam, DiscreteLamination) else lam.atomic_part()
        if len(d) == 0:
            v, cert = 0.0, 0.0
        else:
            a, b = far_arcs(d, base_point)
            v = float(math.fsum(d.w * arc_field(theta, a, b)))
            cert = 0.0
    else:
        v, cert = _dot_E_band(lam, theta, zeta, base_point, tol)
    out = to_chart(v, z) if hasattr(z, "chart") else v
    return (out, cert) if with_certificate else out


def _band_geometry(band, P):
    """Far arcs of band leaves, as functions of t."""
    kb = klein(complex(P))

    def arcs(t):
        al = np.asarray(band.alpha_f(t), dtype=float)
        be = np.asarray(band.beta_f(t), dtype=float)
        sb = _side(al, be, kb)
        mid = al + arc_offset(be, al) / 2.0
        sm = _side(al, be, np.exp(1j * mid))
        far = np.sign(sm) != np.sign(sb)
        return np.where(far, al, be), np.where(far, be, al)

    return arcs


def _depth_split(band, intervals, P, zeta, d):
    """Parts of the crossing intervals where the crossing depth is >= d (or < d)."""
    def depth(t):
        # a miss at an interval end counts as depth 0; a leaf ending at zeta as very deep
        v = float(ray_depths(band.alpha_f(t), band.beta_f(t), P, zeta)[0])
        return 0.0 if math.isnan(v) else min(v, 1e3)

    beyond, before = [], []
    for t0, t1 in intervals:
        ts = np.linspace(t0, t1, 65)
        dep = np.array([depth(t) for t in ts])
        g = dep - d
        cuts = [t0]
        for i in np.flatnonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0):
            cuts.append(brentq(lambda t: depth(t) - d, ts[i], ts[i + 1], xtol=1e-14))
        cuts.append(t1)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi <= lo:
                continue
            (beyond if depth(0.5 * (lo + hi)) >= d else before).append((lo, hi))
    return beyond, before


def _band_integral(band, intervals, theta, P, absolute=False, tol=1e-11):
    arcs = _band_geometry(band, P)

    def f(t):
        a, b = arcs(t)
        v = arc_field(theta, a, b) * band.rho(t)
        return np.abs(v) if absolute else v

    return sum(integrate(f, lo, hi, tol)[0] for lo, hi in intervals)


def _dot_E_band(band, theta, zeta, P, tol):
    cross = band.crossing_tset(P, zeta)
    if not cross:
        return 0.0, 0.0
    consts = decay_constants(P)
    th_upper = band.total_mass()
    if th_upper == 0:
        return 0.0, 0.0
    d_star = max(0.0, math.log(consts["C2"] * th_upper / tol))
    _, before = _depth_split(band, cross, P, zeta, d_star)
    v = _band_integral(band, before, theta, P, tol=0.1 * tol)
    return v, tol


@dataclass
class TailBoundReport:
    d: float
    measured_tail: float
    analytic_bound: float
    thurston: float
    constants: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.measured_tail <= self.analytic_bound

    def to_dict(self):
        return {"d": self.d, "measured_tail": self.measured_tail, "analytic_bound": self.analytic_bound,
                "thurston_lower": self.thurston, "constants": self.constants, "ok": self.ok}


def tail_report(lam, z, base_point, d, thurston=None):
    """Mass of |e_z| over leaves crossing the ray beyond depth d, against the decay bound.

    The bound uses the Thurston-norm lower estimate, which only makes the
    comparison stricter.
    """
    if d < 0:
        raise ValueError("depth must be non-negative")
    theta, zeta = _angle_and_point(z)
    consts = decay_constants(base_point)
    th = thurston_norm(lam).lower if thurston is None else thurston
    if lam.is_discrete:
        dl = lam if isinstance(lam, DiscreteLamination) else lam.atomic_part()
        if len(dl) == 0:
            tail = 0.0
        else:
            dep = ray_depths(dl.alpha, dl.beta, base_point, zeta)
            m = ~np.isnan(dep) & (dep >= d)
            e = np.array([abs(e_tilde(theta, Geodesic.d(a, b))) for a, b in zip(dl.alpha[m], dl.beta[m])])
            tail = float(np.dot(dl.w[m], e)) if m.any() else 0.0
    else:
        cross = lam.crossing_tset(base_point, zeta)
        beyond, _ = _depth_split(lam, cross, base_point, zeta, d)
        tail = _band_integral_etilde(lam, beyond, theta)
    return TailBoundReport(float(d), tail, consts["C2"] * th * math.exp(-d), th, consts)


def _band_integral_etilde(band, intervals, theta):
    def f(t):
        al = np.asarray(band.alpha_f(t), dtype=float)
        be = np.asarray(band.beta_f(t), dtype=float)
        v = np.array([abs(e_tilde(theta, Geodesic.d(x, y))) for x, y in zip(np.atleast_1d(al), np.atleast_1d(be))])
        return v * band.rho(t)

    return sum(integrate(f, lo, hi, 1e-12)[0] for lo, hi in intervals)


def fd_check(lam, z, base_point=0j, t_grid=(1e-1, 1e-2, 1e-3, 1e-4, 1e-5)):
    """Finite differences of the earthquake path against dot_E.

    The discrepancy is measured on the unit circle as complex numbers,
    |(E(z) - z)/t - i z v|.  The angular-speed version is kept as well; it
    can be second order at isolated points where the path has zero
    angular acceleration.
    """
    theta = as_angle(z)
    zc = complex(math.cos(theta), math.sin(theta))
    ref = dot_E(lam, theta, base_point)
    rows = []
    for t in t_grid:
        moved = earthquake_path(lam, t, base_point).eval_angles(theta)
        delta = (moved - theta + math.pi) % TWO_PI - math.pi
        # e^{i delta} - 1 without cancellation
        step = zc * (2j * math.sin(delta / 2) * complex(math.cos(delta / 2), math.sin(delta / 2)))
        disc = abs(step / t - 1j * zc * ref)
        rows.append({"t": t, "fd_angular": delta / t, "angular_discrepancy": abs(delta / t - ref),
                     "discrepancy": disc})
    ts = np.array([r["t"] for r in rows])
    disc = np.array([r["discrepancy"] for r in rows])
    pos = disc > 0
    slope = float(np.polyfit(np.log(ts[pos]), np.log(disc[pos]), 1)[0]) if pos.sum() >= 2 else None
    return {"theta": theta, "dot_E": ref, "rows": rows, "slope": slope}
