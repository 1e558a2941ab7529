"""Boundary points, geodesics, metrics and the Möbius action.

Two charts are used.  The half-plane chart ``"H"`` carries an extended
real ``x`` (``math.inf`` is the point at infinity, always handled by an
explicit branch).  The disk chart ``"D"`` carries an angle in
``[0, 2*pi)``.  They are bridged by the Cayley map
``C(z) = (z - i)/(z + i)``, which on the boundary reads
``theta = pi + 2*arctan(x)`` and sends infinity to the angle 0.

Internally every computation runs on angles.  A boundary angle is lifted
to the homogeneous vector ``(-cos(theta/2), sin(theta/2))`` of its
half-plane coordinate, so real 2x2 matrices act linearly and the point at
infinity needs no special case.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateGeodesic,
    DegenerateTriple,
    GeodesicsCross,
    NonFinite,
    OrientationMismatch,
)

TWO_PI = 2.0 * math.pi
INF = math.inf

EPS_PT = 1e-12
EPS_DET = 1e-10
EPS_TR = 1e-10


# ---------------------------------------------------------------------------
# charts

TWO_PI_LD = 8 * np.arctan(np.longdouble(1))


def _real(x):
    """Float array, or longdouble when the input already carries extra precision."""
    x = np.asarray(x)
    return x if x.dtype == np.longdouble else x.astype(float)


def wrap(theta):
    """Reduce angles to [0, 2*pi); longdouble input stays longdouble."""
    if type(theta) is float:
        t = theta % TWO_PI
        return 0.0 if t >= TWO_PI else t
    theta = _real(theta)
    period = TWO_PI_LD if theta.dtype == np.longdouble else TWO_PI
    t = np.mod(theta, period)
    if t.ndim == 0:
        t = t if t < period else t.dtype.type(0)
        return t if t.dtype == np.longdouble else float(t)
    t[t >= period] = 0.0
    return t


def cayley(x):
    """Half-plane boundary coordinate -> disk angle (infinity -> 0)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore"):
        t = np.where(np.isinf(x), 0.0, math.pi + 2.0 * np.arctan(np.where(np.isinf(x), 0.0, x)))
    return wrap(t)


def cayley_inv(theta):
    """Disk angle -> half-plane coordinate (angle 0 -> infinity)."""
    theta = np.asarray(wrap(theta), dtype=float)
    s = np.sin(theta / 2.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.where(theta == 0.0, INF, -np.cos(theta / 2.0) / s)
    if x.ndim == 0:
        return float(x)
    return x


def homogeneous(theta):
    """Homogeneous half-plane coordinates of boundary angles, shape (2, ...)."""
    half = _real(theta) / 2.0
    if half.ndim == 0:
        return np.array([-np.cos(half), np.sin(half)])
    out = np.empty((2,) + half.shape, dtype=half.dtype)
    np.cos(half, out=out[0])
    np.negative(out[0], out=out[0])
    np.sin(half, out=out[1])
    return out


def from_homogeneous(u):
    u = _real(u)
    return wrap(2.0 * np.arctan2(u[1], -u[0]))


def ccw(a, b, c):
    """True when the angles a, b, c are in strict counterclockwise order."""
    return np.mod(b - a, TWO_PI) < np.mod(c - a, TWO_PI)


def arc_offset(x, start):
    """Counterclockwise angular offset from ``start`` to ``x`` in [0, 2*pi)."""
    return np.mod(np.asarray(x, dtype=float) - start, TWO_PI)


def metric_circle_angles(a, b):
    d = np.mod(np.asarray(a, dtype=float) - b, TWO_PI)
    return np.minimum(d, TWO_PI - d)


# ---------------------------------------------------------------------------
# boundary points and geodesics

@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the circle at infinity, in chart ``"H"`` or ``"D"``."""

    chart: str
    v: float

    def __post_init__(self):
        if self.chart not in ("H", "D"):
            raise ValueError(f"unknown chart {self.chart!r}")
        v = float(self.v)
        if math.isnan(v):
            raise NonFinite("boundary point is NaN")
        if self.chart == "D":
            if math.isinf(v):
                raise NonFinite("disk-chart angle must be finite")
            v = wrap(v)
        elif math.isinf(v):
            v = INF
        object.__setattr__(self, "v", v)

    @property
    def angle(self):
        return self.v if self.chart == "D" else float(cayley(self.v))

    @property
    def x(self):
        return self.v if self.chart == "H" else cayley_inv(self.v)

    @property
    def is_inf(self):
        return self.chart == "H" and math.isinf(self.v)

    def to(self, chart):
        if chart == self.chart:
            return self
        return BoundaryPoint(chart, self.angle if chart == "D" else self.x)

    def __repr__(self):
        v = "inf" if self.is_inf else f"{self.v:.12g}"
        return f"BoundaryPoint({self.chart}, {v})"


def hp(x):
    return BoundaryPoint("H", x)


def dp(theta):
    return BoundaryPoint("D", theta)


def as_angle(p):
    return p.angle if isinstance(p, BoundaryPoint) else float(wrap(p))


class Geodesic:
    """Complete geodesic given by two distinct ideal endpoints.

    The endpoints are stored as disk angles in the order given, which is
    used as an orientation where one is needed.  Equality ignores order.
    """

    __slots__ = ("alpha", "beta", "chart")

    def __init__(self, p, q, chart=None):
        if isinstance(p, BoundaryPoint) and isinstance(q, BoundaryPoint):
            if p.chart != q.chart:
                raise ValueError("geodesic endpoints must share a chart")
            chart = chart or p.chart
        self.alpha = as_angle(p)
        self.beta = as_angle(q)
        self.chart = chart or "D"
        if metric_circle_angles(self.alpha, self.beta) <= EPS_PT:
            raise DegenerateGeodesic("geodesic endpoints coincide")

    @classmethod
    def h(cls, x, y):
        return cls(hp(x), hp(y))

    @classmethod
    def d(cls, a, b):
        return cls(dp(a), dp(b))

    def endpoints(self, chart=None):
        chart = chart or self.chart
        return dp(self.alpha).to(chart), dp(self.beta).to(chart)

    def reversed(self):
        g = Geodesic.__new__(Geodesic)
        g.alpha, g.beta, g.chart = self.beta, self.alpha, self.chart
        return g

    def __eq__(self, other):
        if not isinstance(other, Geodesic):
            return NotImplemented
        return {self.alpha, self.beta} == {other.alpha, other.beta}

    def __hash__(self):
        return hash(frozenset((self.alpha, self.beta)))

    def __repr__(self):
        p, q = self.endpoints()
        return f"Geodesic({p.v if not p.is_inf else 'inf'}, {q.v if not q.is_inf else 'inf'}; {self.chart})"


def geodesics_close(g, h, tol=1e-8):
    return metric_geodesics(g, h) <= tol


# ---------------------------------------------------------------------------
# Möbius maps (real 2x2 matrices of determinant one, half-plane chart)

def canonical(M):
    """Pick the representative of +-M whose first non-negligible entry is positive."""
    M = np.array(M, dtype=float).reshape(2, 2)
    for v in (M[0, 0], M[1, 0], M[0, 1], M[1, 1]):
        if abs(v) > 1e-300:
            return M if v > 0 else -M
    return M


def mobius(m):
    """Normalise a real 2x2 matrix with positive determinant to det 1."""
    M = np.array(m, dtype=float).reshape(2, 2)
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if not det > 0:
        raise ValueError("Möbius matrix needs a positive determinant")
    return canonical(M / math.sqrt(det))


IDENTITY = np.eye(2)


def det(M):
    return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]


def is_valid(M, eps=EPS_DET):
    return abs(det(M) - 1.0) < eps


def inverse(M):
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])


def compose(*Ms):
    out = np.eye(2)
    for M in Ms:
        out = out @ M
    return out


def same_map(M, N, tol=1e-9):
    return min(np.max(np.abs(M - N)), np.max(np.abs(M + N))) < tol


def act(M, theta):
    """Apply M to boundary angles (vectorised)."""
    u = homogeneous(theta)
    return from_homogeneous((M @ u.reshape(2, -1)).reshape(u.shape))


def circle_derivative(M, theta):
    """d(M.theta)/d(theta) = 1/|M u(theta)|^2 for a det-one M."""
    w = np.tensordot(M, homogeneous(theta), axes=1)
    return 1.0 / (w[0] ** 2 + w[1] ** 2)


def max_circle_derivative(M):
    return 1.0 / np.linalg.svd(M, compute_uv=False)[-1] ** 2


def mobius_apply(M, p):
    """Apply M to a boundary point; the output chart equals the input chart."""
    if p.chart == "D":
        return dp(act(M, p.v))
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    x = p.v
    if math.isinf(x):
        return hp(INF) if c == 0 else hp(a / c)
    den = c * x + d
    if den == 0:
        return hp(INF)
    return hp((a * x + b) / den)


def act_geodesic(M, g):
    out = Geodesic.__new__(Geodesic)
    out.alpha = float(act(M, g.alpha))
    out.beta = float(act(M, g.beta))
    out.chart = g.chart
    return out


def _bracket(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _normaliser(u1, u2, u3):
    """Matrix sending u1, u2, u3 to 0, 1, infinity (homogeneous columns)."""
    r0 = _bracket(u2, u3) * np.array([u1[1], -u1[0]])
    r1 = _bracket(u2, u1) * np.array([u3[1], -u3[0]])
    return np.array([r0, r1])


def _check_triple(t):
    for i in range(3):
        for j in range(i + 1, 3):
            if metric_circle_angles(t[i], t[j]) <= EPS_PT:
                raise DegenerateTriple(f"points {i} and {j} coincide")


def mobius_from_triples(src, dst):
    """The orientation-preserving Möbius map sending src[k] to dst[k]."""
    s = [as_angle(p) for p in src]
    t = [as_angle(p) for p in dst]
    _check_triple(s)
    _check_triple(t)
    if bool(ccw(*s)) != bool(ccw(*t)):
        raise OrientationMismatch("triples have opposite cyclic orders")
    S = _normaliser(*homogeneous(s).T)
    T = _normaliser(*homogeneous(t).T)
    return mobius(np.linalg.solve(T, S))


def hyperbolic_translation(axis, length):
    """Translation by ``length`` along ``axis`` oriented from alpha to beta.

    alpha is the repelling and beta the attracting fixed point when
    length > 0.  For the axis (0, inf) this is diag(e^{t/2}, e^{-t/2}).
    """
    if length == 0:
        return np.eye(2)
    up, uq = homogeneous([axis.alpha, axis.beta]).T
    G = np.column_stack([uq, up])
    D = np.diag([math.exp(length / 2.0), math.exp(-length / 2.0)])
    return mobius(G @ D @ np.linalg.inv(G))


def translation_ld(alpha, beta, length):
    """Extended-precision translation along (alpha -> beta) as cosh(t/2) I + sinh(t/2) K.

    K is the reflection-like involution fixing the endpoints with
    eigenvalues +1 at beta and -1 at alpha.  Far-away axes have matrices
    with large entries, and float64 loses about eps * |M|^2 of the length.
    """
    ld = np.longdouble
    ta, tb = ld(alpha) / 2, ld(beta) / 2
    up = np.array([-np.cos(ta), np.sin(ta)])
    uq = np.array([-np.cos(tb), np.sin(tb)])
    jp = np.array([-up[1], up[0]])
    jq = np.array([-uq[1], uq[0]])
    br = jp @ uq
    K = (np.outer(uq, jp) + np.outer(up, jq)) / br
    h = ld(length) / 2
    return np.cosh(h) * np.eye(2, dtype=ld) + np.sinh(h) * K


def log_multiplier(M, theta):
    """log of the circle derivative of M at theta, valid for any det > 0 (any float dtype)."""
    ld = np.longdouble
    M = np.asarray(M, dtype=ld)
    t = ld(theta) / 2
    u = np.array([-np.cos(t), np.sin(t)])
    v = M @ u
    d = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    return float(np.log(d / (v @ v)))


def translation_length_axis(M, eps_tr=EPS_TR):
    """(length, oriented axis) of a hyperbolic M, or (0.0, None) otherwise."""
    M = np.asarray(M, dtype=float)
    tr = M[0, 0] + M[1, 1]
    if abs(tr) <= 2.0 + eps_tr:
        return 0.0, None
    if tr < 0:
        M, tr = -M, -tr
    root = math.sqrt((tr - 2.0) * (tr + 2.0))
    lam_big = 0.5 * (tr + root)
    lam_small = 1.0 / lam_big
    ends = []
    for lam in (lam_small, lam_big):
        v1 = np.array([M[0, 1], lam - M[0, 0]])
        v2 = np.array([lam - M[1, 1], M[1, 0]])
        v = v1 if np.hypot(*v1) >= np.hypot(*v2) else v2
        ends.append(float(from_homogeneous(v)))
    return 2.0 * math.acosh(tr / 2.0), Geodesic.d(ends[0], ends[1])


# ---------------------------------------------------------------------------
# metrics

def metric_circle(p, q):
    """Angle distance at the disk origin, in [0, pi]."""
    return float(metric_circle_angles(as_angle(p), as_angle(q)))


def metric_geodesics_angles(a1, b1, a2, b2):
    m = metric_circle_angles
    return np.minimum(np.maximum(m(a1, a2), m(b1, b2)), np.maximum(m(a1, b2), m(b1, a2)))


def metric_geodesics(g, h):
    return float(metric_geodesics_angles(g.alpha, g.beta, h.alpha, h.beta))


def in_open_arc(x, start, end, tol=EPS_PT):
    """x strictly inside the counterclockwise arc from start to end."""
    off = arc_offset(x, start)
    length = arc_offset(end, start)
    return (off > tol) & (off < length - tol)


def linked_angles(a1, b1, a2, b2, tol=EPS_PT):
    """True when the endpoint pairs strictly interleave (the geodesics cross)."""
    x = in_open_arc(a2, a1, b1, tol)
    y = in_open_arc(b2, a1, b1, tol)
    xo = in_open_arc(a2, b1, a1, tol)
    yo = in_open_arc(b2, b1, a1, tol)
    return (x & yo) | (y & xo)


def share_endpoint(g, h, tol=EPS_PT):
    return min(
        metric_circle_angles(g.alpha, h.alpha), metric_circle_angles(g.alpha, h.beta),
        metric_circle_angles(g.beta, h.alpha), metric_circle_angles(g.beta, h.beta),
    ) <= tol


def hyperbolic_distance(g, h):
    """Hyperbolic distance between disjoint geodesics (0 when asymptotic)."""
    if linked_angles(g.alpha, g.beta, h.alpha, h.beta):
        raise GeodesicsCross("geodesics cross")
    if share_endpoint(g, h):
        return 0.0
    a, b = g.alpha, g.beta
    if in_open_arc(h.alpha, a, b):
        a, b = b, a
    if arc_offset(h.alpha, b) < arc_offset(h.beta, b):
        c, d = h.alpha, h.beta
    else:
        c, d = h.beta, h.alpha
    s = (math.sin((a - b) / 2) * math.sin((c - d) / 2)) / (
        math.sin((a - d) / 2) * math.sin((b - c) / 2))
    return 2.0 * math.asinh(1.0 / math.sqrt(abs(s)))


# ---------------------------------------------------------------------------
# interior points (complex numbers in the unit disk)

def disk_from_h(z):
    return (z - 1j) / (z + 1j)


def h_from_disk(w):
    return 1j * (1 + w) / (1 - w)


def klein(w):
    return 2 * w / (1 + abs(w) ** 2)


def poincare_from_klein(k):
    return k / (1 + np.sqrt(1 - np.abs(k) ** 2))


def distance_points(z, w):
    """Hyperbolic distance between two points of the unit disk."""
    r = abs(z - w) / abs(1 - np.conj(w) * z)
    return math.inf if r >= 1.0 else 2.0 * math.atanh(r)


def disk_matrix(M):
    """M conjugated to the disk: (alpha, beta) with z -> (alpha z + beta)/(conj(beta) z + conj(alpha))."""
    C = np.array([[1, -1j], [1, 1j]])
    Ci = np.array([[1j, 1j], [-1, 1]]) / 2j
    D = C @ M @ Ci
    return D[0, 0], D[0, 1]


def act_interior(M, w):
    """Apply the Möbius map M (half-plane matrix) to disk points w."""
    al, be = disk_matrix(M)
    w = np.asarray(w, dtype=complex)
    return (al * w + be) / (np.conj(be) * w + np.conj(al))


def moving_to_origin(w):
    """A disk Möbius map sending the interior point w to 0, as a half-plane matrix."""
    z = h_from_disk(w)
    x, y = z.real, z.imag
    # affine map z -> (z - x)/y sends z to i, the preimage of the disk origin
    return mobius([[1.0 / math.sqrt(y), -x / math.sqrt(y)], [0.0, math.sqrt(y)]])
