"""Boxes of geodesics, cross ratios and the Liouville measure.

A box ``[a, b] x [c, d]`` is the set of geodesics with one endpoint in
the counterclockwise arc from a to b and the other in the arc from c to
d, the four corners being in counterclockwise order.  Corners are stored
as disk angles.
"""

import math

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateBox, DegenerateQuadruple, DegenerateTriple, NotLogTwoBox
from .hyp_core import (
    EPS_PT,
    TWO_PI,
    Geodesic,
    act,
    act_geodesic,
    arc_offset,
    as_angle,
    canonical,
    dp,
    hp,
    hyperbolic_translation,
    in_open_arc,
    metric_circle_angles,
    mobius,
    mobius_from_triples,
    wrap,
)

LOG2 = math.log(2.0)
TOL_L = 1e-8
OMEGA0 = (1.0 + math.sqrt(2.0)) ** 2

FLAGS = frozenset({"open_a", "open_b", "open_c", "open_d", "point_ab", "point_cd"})


def cross_ratio_angles(a, b, c, d):
    """(a-c)(b-d)/((a-d)(b-c)) for boundary points given as disk angles."""
    return (np.sin((a - c) / 2) * np.sin((b - d) / 2)) / (np.sin((a - d) / 2) * np.sin((b - c) / 2))


def cr_minus_one(a, b, c, d):
    """cross_ratio - 1 = (a-b)(c-d)/((a-d)(b-c)), free of cancellation."""
    return (np.sin((a - b) / 2) * np.sin((c - d) / 2)) / (np.sin((a - d) / 2) * np.sin((b - c) / 2))


def cross_ratio(a, b, c, d):
    """Real cross ratio of four distinct boundary points (any chart)."""
    t = [as_angle(p) for p in (a, b, c, d)]
    for i in range(4):
        for j in range(i + 1, 4):
            if metric_circle_angles(t[i], t[j]) <= EPS_PT:
                raise DegenerateQuadruple(f"points {i} and {j} coincide")
    return float(cross_ratio_angles(*t))


def _in_arc(x, s, e, open_s, open_e, point, tol=EPS_PT):
    x = np.asarray(x, dtype=float)
    if point:
        return metric_circle_angles(x, s) <= tol
    off = arc_offset(x, s)
    off = np.where(off > TWO_PI - tol, off - TWO_PI, off)
    length = arc_offset(e, s)
    lo = off > tol if open_s else off >= -tol
    hi = off < length - tol if open_e else off <= length + tol
    return lo & hi


class GeodesicBox:
    """A box [a, b] x [c, d] with optional per-side flags.

    Flags: ``open_a`` .. ``open_d`` remove a corner from its arc, and
    ``point_ab`` / ``point_cd`` mark a side that is a single point.
    """

    __slots__ = ("a", "b", "c", "d", "flags", "chart")

    def __init__(self, a, b, c, d, flags=(), chart=None):
        pts = (a, b, c, d)
        if chart is None:
            chart = pts[0].chart if hasattr(pts[0], "chart") else "D"
        self.a, self.b, self.c, self.d = (as_angle(p) for p in pts)
        flags = set(flags)
        if not flags <= FLAGS:
            raise ValueError(f"unknown box flags {sorted(flags - FLAGS)}")
        if metric_circle_angles(self.a, self.b) <= EPS_PT:
            flags.add("point_ab")
            self.b = self.a
        if metric_circle_angles(self.c, self.d) <= EPS_PT:
            flags.add("point_cd")
            self.d = self.c
        self.flags = frozenset(flags)
        self.chart = chart
        ob = arc_offset(self.b, self.a)
        oc = arc_offset(self.c, self.a)
        od = arc_offset(self.d, self.a)
        if not (ob < oc - EPS_PT and oc <= od and od < TWO_PI - EPS_PT):
            if metric_circle_angles(self.b, self.c) <= EPS_PT or metric_circle_angles(self.d, self.a) <= EPS_PT:
                raise DegenerateQuadruple("box arcs touch")
            raise ValueError("box corners are not in counterclockwise order")

    @classmethod
    def h(cls, a, b, c, d, flags=()):
        return cls(hp(a), hp(b), hp(c), hp(d), flags)

    @classmethod
    def d_(cls, a, b, c, d, flags=()):
        return cls(dp(a), dp(b), dp(c), dp(d), flags)

    @property
    def corners(self):
        return self.a, self.b, self.c, self.d

    @property
    def degenerate(self):
        return "point_ab" in self.flags or "point_cd" in self.flags

    def corner_points(self, chart=None):
        chart = chart or self.chart
        return tuple(dp(t).to(chart) for t in self.corners)

    def arc_lengths(self):
        return float(arc_offset(self.b, self.a)), float(arc_offset(self.d, self.c))

    def in_first(self, x):
        f = self.flags
        return _in_arc(x, self.a, self.b, "open_a" in f, "open_b" in f, "point_ab" in f)

    def in_second(self, x):
        f = self.flags
        return _in_arc(x, self.c, self.d, "open_c" in f, "open_d" in f, "point_cd" in f)

    def contains(self, alpha, beta):
        """Vectorised membership of geodesics (alpha, beta) in the box."""
        return (self.in_first(alpha) & self.in_second(beta)) | (self.in_first(beta) & self.in_second(alpha))

    def contains_geodesic(self, g):
        return bool(self.contains(g.alpha, g.beta))

    def image(self, M):
        out = GeodesicBox.__new__(GeodesicBox)
        out.a, out.b, out.c, out.d = (float(v) for v in act(M, np.array(self.corners)))
        if "point_ab" in self.flags:
            out.b = out.a
        if "point_cd" in self.flags:
            out.d = out.c
        out.flags = self.flags
        out.chart = self.chart
        return out

    def with_flags(self, flags):
        out = GeodesicBox.__new__(GeodesicBox)
        out.a, out.b, out.c, out.d = self.corners
        out.flags = frozenset(flags)
        out.chart = self.chart
        return out

    def sort_key(self):
        return tuple(round(v, 12) for v in self.corners)

    def __repr__(self):
        pts = ", ".join(f"{v:.6g}" for v in self.corners)
        fl = f", flags={sorted(self.flags)}" if self.flags else ""
        return f"GeodesicBox({pts}{fl})"


def liouville(Q, allow_degenerate=False):
    """Liouville measure |log|cr(a, b, c, d)|| of a box."""
    if Q.degenerate:
        if allow_degenerate:
            return 0.0
        raise DegenerateBox("box has a point side", value=0.0)
    s = cr_minus_one(*Q.corners)
    return float(np.log1p(s))


def liouville_corners(a, b, c, d):
    return np.log1p(cr_minus_one(a, b, c, d))


# ---------------------------------------------------------------------------
# reference boxes

Q_STAR = GeodesicBox.d_(1.5 * math.pi, 0.0, 0.5 * math.pi, math.pi)
CENTER_STAR = Geodesic.d(1.75 * math.pi, 0.75 * math.pi)
OMEGA1 = math.pi / 8
Q_STAR_0 = GeodesicBox.d_(13 * OMEGA1, 15 * OMEGA1, 5 * OMEGA1, 7 * OMEGA1)
L_Q_STAR_0 = math.log(4.0 / (math.sqrt(2.0) + 2.0))


def gamma_Q(Q, tol=TOL_L):
    """The Möbius map sending the corners of Q* to those of Q, in order."""
    L = liouville(Q)
    if abs(L - LOG2) > tol:
        raise NotLogTwoBox(f"box has Liouville measure {L!r}, not log 2")
    M = mobius_from_triples(Q_STAR.corners[:3], Q.corners[:3])
    return canonical(M)


def box_center(Q, tol=TOL_L):
    g = act_geodesic(gamma_Q(Q, tol), CENTER_STAR)
    g.chart = Q.chart
    return g


def symmetric_box_h(a):
    """The box [-a, a] x [w0 a, -w0 a] of the half-plane, centred on (0, inf)."""
    return GeodesicBox.h(-a, a, OMEGA0 * a, -OMEGA0 * a)


def _hom(t):
    return -math.cos(t / 2.0), math.sin(t / 2.0)


def _normaliser_rows(u1, u2, u3):
    """Rows of the matrix sending u1, u2, u3 to 0, 1, infinity."""
    b23 = u2[0] * u3[1] - u2[1] * u3[0]
    b21 = u2[0] * u1[1] - u2[1] * u1[0]
    return b23 * u1[1], -b23 * u1[0], b21 * u3[1], -b21 * u3[0]


# gamma sends the triple (alpha*, pi/4, beta*) of Q* to (alpha, mid, beta)
_S = np.array(_normaliser_rows(_hom(1.75 * math.pi), _hom(0.25 * math.pi), _hom(0.75 * math.pi))).reshape(2, 2)
_G = np.column_stack([_hom(CENTER_STAR.beta), _hom(CENTER_STAR.alpha)])
_G_INV = np.linalg.inv(_G)
# translation by u along the centre of Q* is e^{-u/2} I + 2 sinh(u/2) P
_P = _G @ np.diag([1.0, 0.0]) @ _G_INV
_S00, _S01, _S10, _S11 = _S.ravel()
_P00, _P01, _P10, _P11 = _P.ravel()


def family_gamma(alpha, beta, u):
    """gamma with gamma(Q*) the family box of centre (alpha, beta) and shift u."""
    off = arc_offset(beta, alpha)
    if min(off, TWO_PI - off) <= EPS_PT:
        raise DegenerateTriple("centre endpoints coincide")
    t00, t01, t10, t11 = _normaliser_rows(_hom(alpha), _hom(alpha + off / 2.0), _hom(beta))
    # g = T^-1 S, up to the scalar det(T)
    g00 = t11 * _S00 - t01 * _S10
    g01 = t11 * _S01 - t01 * _S11
    g10 = -t10 * _S00 + t00 * _S10
    g11 = -t10 * _S01 + t00 * _S11
    d = g00 * g11 - g01 * g10
    if not d > 0:
        raise ValueError("Möbius matrix needs a positive determinant")
    r = 1.0 / math.sqrt(d)
    lead = next((v for v in (g00, g10, g01, g11) if abs(v) > 1e-300), 1.0)
    r = r if lead > 0 else -r
    g00, g01, g10, g11 = g00 * r, g01 * r, g10 * r, g11 * r
    if u != 0:
        em, k = math.exp(-u / 2.0), 2.0 * math.sinh(u / 2.0)
        h00, h01, h10, h11 = em + k * _P00, k * _P01, k * _P10, em + k * _P11
        g00, g01, g10, g11 = (g00 * h00 + g01 * h10, g00 * h01 + g01 * h11,
                              g10 * h00 + g11 * h10, g10 * h01 + g11 * h11)
    return np.array([[g00, g01], [g10, g11]])


def family_gammas(alpha, beta, u):
    """Vectorised family_gamma, shape (n, 2, 2)."""
    alpha, beta, u = (np.asarray(x, dtype=float).ravel() for x in (alpha, beta, u))
    off = np.mod(beta - alpha, TWO_PI)
    if np.any(np.minimum(off, TWO_PI - off) <= EPS_PT):
        raise DegenerateTriple("centre endpoints coincide")
    u1 = np.stack([-np.cos(alpha / 2), np.sin(alpha / 2)])
    u2 = np.stack([-np.cos((alpha + off / 2) / 2), np.sin((alpha + off / 2) / 2)])
    u3 = np.stack([-np.cos(beta / 2), np.sin(beta / 2)])
    t00, t01, t10, t11 = _normaliser_rows(u1, u2, u3)
    dt = t00 * t11 - t01 * t10
    adj = np.stack([np.stack([t11, -t01], -1), np.stack([-t10, t00], -1)], -2) / dt[:, None, None]
    g = adj @ _S
    g /= np.sqrt(g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] * g[:, 1, 0])[:, None, None]
    # same sign convention as canonical(): first entry in (00, 10, 01, 11) order positive
    flat = g.reshape(-1, 4)[:, [0, 2, 1, 3]]
    lead = flat[np.arange(len(flat)), np.argmax(np.abs(flat) > 1e-300, axis=1)]
    g *= np.where(lead < 0, -1.0, 1.0)[:, None, None]
    e = np.exp(u / 2.0)
    D = np.zeros((len(u), 2, 2))
    D[:, 0, 0], D[:, 1, 1] = e, 1.0 / e
    return g @ (_G @ D @ _G_INV)


def logit(s):
    return math.log(s / (1.0 - s))


def log2_box_family(center, s):
    """A log-2 box centred on ``center``; s in (0, 1) slides it along the centre.

    s = 1/2 is the reference position.  Every log-2 box with this centre
    appears for exactly one s.
    """
    if not 0.0 < s < 1.0:
        raise ValueError("family parameter s must lie in (0, 1)")
    Q = Q_STAR.image(family_gamma(center.alpha, center.beta, logit(s)))
    Q.chart = center.chart
    return Q


# ---------------------------------------------------------------------------
# boxes spanned by geodesics

def minimal_box(g1, g2):
    """Smallest closed box containing two disjoint geodesics.

    g1 and g2 become its extreme geodesics (a, d) and (b, c).  Equal or
    asymptotic geodesics give a generalized box with point sides.
    """
    p1, q1 = g1.alpha, g1.beta
    if in_open_arc(g2.alpha, p1, q1) or in_open_arc(g2.beta, p1, q1):
        p1, q1 = q1, p1
    if arc_offset(g2.alpha, q1) <= arc_offset(g2.beta, q1):
        p2, q2 = g2.alpha, g2.beta
    else:
        p2, q2 = g2.beta, g2.alpha
    return GeodesicBox.d_(q1, p2, q2, p1)


def inflate_box(Q, target=LOG2):
    """Grow both arcs of Q symmetrically until the Liouville measure is ``target``."""
    a, b, c, d = Q.corners
    gap = min(arc_offset(c, b), arc_offset(a, d))
    L0 = liouville(Q, allow_degenerate=True)
    if L0 > target + TOL_L:
        raise ValueError("box is already larger than the target")

    def f(t):
        return float(liouville_corners(a - t, b + t, c - t, d + t)) - target

    hi = 0.5 * gap * (1 - 1e-12)
    t = brentq(f, 0.0, hi, xtol=1e-15, rtol=1e-15) if f(0.0) < 0 else 0.0
    return GeodesicBox.d_(a - t, b + t, c - t, d + t)


def box_geodesics(Q):
    """Geodesics (a, b), (c, d), (a, d), (b, c) of a non-degenerate box."""
    a, b, c, d = Q.corners
    return Geodesic.d(a, b), Geodesic.d(c, d), Geodesic.d(a, d), Geodesic.d(b, c)


def boxes_meet(B, Q):
    """True when some geodesic lies in both boxes."""
    def arcs_meet(s1, e1, s2, e2):
        return (_in_arc(s2, s1, e1, False, False, False) or _in_arc(s1, s2, e2, False, False, False))

    A1, A2 = (B.a, B.b), (B.c, B.d)
    Q1, Q2 = (Q.a, Q.b), (Q.c, Q.d)
    return bool((arcs_meet(*A1, *Q1) and arcs_meet(*A2, *Q2)) or (arcs_meet(*A1, *Q2) and arcs_meet(*A2, *Q1)))


def box_inside(B, Q):
    """True when every geodesic of B lies in Q (closed boxes)."""
    def arc_in(s1, e1, s2, e2):
        return bool(_in_arc(s1, s2, e2, False, False, False)) and bool(_in_arc(e1, s2, e2, False, False, False)) \
            and arc_offset(e1, s1) <= arc_offset(e2, s2) + EPS_PT and \
            arc_offset(s1, s2) <= arc_offset(e2, s2) + EPS_PT

    A1, A2 = (B.a, B.b), (B.c, B.d)
    Q1, Q2 = (Q.a, Q.b), (Q.c, Q.d)
    return (arc_in(*A1, *Q1) and arc_in(*A2, *Q2)) or (arc_in(*A1, *Q2) and arc_in(*A2, *Q1))


def cover_count(L_target, box=Q_STAR, max_depth=30):
    """Number of cells in a dyadic partition of ``box`` into boxes of Liouville measure <= L_target."""
    from .approx import partition_window

    return len(partition_window(box, L_target, max_depth=max_depth).boxes)
