"""Norms on functions of geodesics, on differences of laminations and on circle fields."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.stats import qmc

from .boxes import (
    CENTER_STAR,
    L_Q_STAR_0,
    LOG2,
    Q_STAR,
    Q_STAR_0,
    inflate_box,
    liouville_corners,
)
from .errors import BadExponent, BudgetExhausted, NonFinite
from .hyp_core import (
    TWO_PI,
    Geodesic,
    act,
    arc_offset,
    circle_derivative,
    from_homogeneous,
    homogeneous,
    inverse,
    max_circle_derivative,
    metric_geodesics_angles,
    mobius_from_triples,
    wrap,
)
from .laminations import EMPTY, DiscreteLamination, box_sup
from .search import Counter, SearchBudget, family_box, grid_centres, maximise_family

# ---------------------------------------------------------------------------
# profiles on the geodesics of the reference box

RAMP = math.pi / 8


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def _side_bump(x, start, width=RAMP, step=_smoothstep):
    """Plateau on [start + width, start + pi/2 - width], ramps down to 0 at start and start + pi/2."""
    o = arc_offset(x, start)
    inside = o < math.pi / 2
    u = np.minimum(o, math.pi / 2 - o) / width
    return np.where(inside, step(u), 0.0)


@dataclass(frozen=True)
class Profile:
    """A function on geodesics with known sup and Lipschitz constant (for the box metric)."""

    name: str
    fn: object
    lip: float
    sup: float

    def __call__(self, alpha, beta):
        return self.fn(np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float))

    @property
    def one_norm(self):
        return max(self.sup, self.lip)


def _two_sided(f1, f2):
    def fn(a, b):
        return np.maximum(np.minimum(f1(a), f2(b)), np.minimum(f1(b), f2(a)))

    return fn


def _bump(a, b):
    return _two_sided(lambda x: _side_bump(x, 1.5 * math.pi), lambda x: _side_bump(x, 0.5 * math.pi))(a, b)


# the smoothstep has slope at most 3/2 over a ramp of width pi/8
BUMP = Profile("bump", _bump, 1.5 / RAMP, 1.0)


def _cone(a, b):
    d = metric_geodesics_angles(a, b, CENTER_STAR.alpha, CENTER_STAR.beta)
    return np.maximum(0.0, math.pi / 4 - d)


CONE = Profile("cone", _cone, 1.0, math.pi / 4)


def trapezoid(width):
    """Linear collar of slope 1/width around the plateau Q*_0 (width <= pi/8)."""
    if not 0 < width <= RAMP:
        raise ValueError("collar width must lie in (0, pi/8]")

    def lin(u):
        return np.clip(u, 0.0, 1.0)

    def fn(a, b):
        return _two_sided(lambda x: _side_bump(x, 1.5 * math.pi, width, lin),
                          lambda x: _side_bump(x, 0.5 * math.pi, width, lin))(a, b)

    return Profile(f"trapezoid({width:g})", fn, 1.0 / width, 1.0)


def gaussian_profile(centre, scale=1.0):
    """exp(-(d(g, centre)/scale)^2): a fixed continuous profile (not supported in Q*)."""
    def fn(a, b):
        d = metric_geodesics_angles(a, b, centre.alpha, centre.beta)
        return np.exp(-(d / scale) ** 2)

    return Profile(f"gauss({centre.alpha:.4g},{centre.beta:.4g};{scale:g})", fn,
                   math.sqrt(2.0 / math.e) / scale, 1.0)


ZERO = Profile("zero", lambda a, b: np.zeros(np.broadcast(a, b).shape), 0.0, 0.0)

PROFILES = {"bump": BUMP, "cone": CONE}


def _check_nu(nu):
    if not (0.0 < nu <= 1.0) or not math.isfinite(nu):
        raise BadExponent(f"exponent must lie in (0, 1], got {nu!r}")


def holder_bound(sup, lip, nu):
    """Analytic bound of max(sup, sup |f(g)-f(h)|/d(g,h)^nu) from sup and Lipschitz data.

    The quotient is at most min(lip d, 2 sup)/d^nu with d <= pi.
    """
    osc = 2.0 * sup
    if lip == 0:
        return sup
    d = min(osc / lip, math.pi)
    return max(sup, lip * d ** (1.0 - nu) if d < osc / lip else osc ** (1.0 - nu) * lip ** nu)


def profile_scale(profile, nu):
    """Scale making the profile a nu-test function.

    The bump uses ((pi/2)^(1-nu) ||phi_0||_1)^-1; other profiles use their
    exact norm where known, else the analytic bound.
    """
    _check_nu(nu)
    if profile is BUMP:
        return 1.0 / ((math.pi / 2) ** (1.0 - nu) * BUMP.one_norm)
    if profile is CONE:
        # |cone(g) - cone(h)| <= min(d, pi/4), so the quotient peaks at d = pi/4
        return (4.0 / math.pi) ** (1.0 - nu)
    return 1.0 / holder_bound(profile.sup, profile.lip, nu)


@dataclass
class TestFunction:
    """profile o gamma^-1, scaled; supported in the box gamma(Q*)."""

    profile: Profile
    nu: float
    gamma: np.ndarray
    scale: float

    @classmethod
    def make(cls, profile, nu, gamma=None):
        gamma = np.eye(2) if gamma is None else gamma
        return cls(profile, nu, gamma, profile_scale(profile, nu))

    @property
    def box(self):
        return Q_STAR.image(self.gamma)

    def __call__(self, alpha, beta):
        gi = inverse(self.gamma)
        return self.scale * self.profile(act(gi, alpha), act(gi, beta))

    def pair(self, lam):
        if lam is EMPTY:
            return 0.0
        return lam.integrate(self, self.box)


# ---------------------------------------------------------------------------
# Hölder norms

def _pairs(n, seed, gamma=None):
    """Low-discrepancy pairs of geodesics with log-spread separations."""
    m = max(1, math.ceil(math.log2(n)))
    s = qmc.Sobol(d=5, scramble=True, seed=seed).random_base2(m)[:n]
    a = TWO_PI * s[:, 0]
    b = a + (0.02 + 0.96 * s[:, 1]) * TWO_PI
    mag = np.exp(np.log(1e-4) + (np.log(math.pi) - np.log(1e-4)) * s[:, 2])
    ang = TWO_PI * s[:, 3]
    a2, b2 = a + mag * np.cos(ang), b + mag * np.sin(ang)
    if gamma is not None:
        # half of the pairs live near the transported support
        h = n // 2
        ref = qmc.Sobol(d=2, scramble=True, seed=seed + 1).random_base2(m)[:h]
        x = 1.5 * math.pi + 0.5 * math.pi * ref[:, 0]
        y = 0.5 * math.pi + 0.5 * math.pi * ref[:, 1]
        a[:h], b[:h] = act(gamma, x), act(gamma, y)
        small = mag[:h] * 1e-2
        a2[:h], b2[:h] = act(gamma, x + small * np.cos(ang[:h])), act(gamma, y + small * np.sin(ang[:h]))
    return wrap(a), wrap(b), wrap(a2), wrap(b2)


@dataclass
class HolderResult:
    lower: float
    upper: float
    nu: float


def holder_quotient_sup(f, nu, n_pairs=10_000, seed=0, gamma=None):
    a, b, a2, b2 = _pairs(n_pairs, seed, gamma)
    fa, fb = f(a, b), f(a2, b2)
    d = metric_geodesics_angles(a, b, a2, b2)
    ok = d > 1e-14
    q = np.abs(fa - fb)[ok] / d[ok] ** nu
    return float(max(np.max(np.abs(fa)), np.max(np.abs(fb)), np.max(q) if q.size else 0.0))


def holder_norm(f, nu, n_pairs=10_000, seed=0):
    """(sampled lower bound, analytic upper bound) of the nu-norm of f.

    f is a Profile or a TestFunction (profile transported by gamma).
    """
    _check_nu(nu)
    if isinstance(f, TestFunction):
        lip = f.scale * f.profile.lip * max_circle_derivative(inverse(f.gamma))
        sup = f.scale * f.profile.sup
        gamma = f.gamma
    else:
        lip, sup, gamma = f.lip, f.sup, None
    if sup == 0:
        return HolderResult(0.0, 0.0, nu)
    lower = holder_quotient_sup(f, nu, n_pairs, seed, gamma)
    return HolderResult(lower, holder_bound(sup, lip, nu), nu)


def audit_test_function(tf, n_pairs=10_000, seed=1):
    """Sampled nu-norm of the scaled profile; a test function needs it <= 1."""
    def g(a, b):
        return tf.scale * tf.profile(a, b)

    return holder_quotient_sup(g, tf.nu, n_pairs, seed, np.eye(2))


# ---------------------------------------------------------------------------
# differences of laminations

def _pairing_score(lam1, lam2, profile, scale):
    def score(gamma):
        box = Q_STAR.image(gamma)
        gi = inverse(gamma)

        def f(a, b):
            return profile(act(gi, a), act(gi, b))

        v1 = lam1.integrate(f, box) if lam1 is not EMPTY else 0.0
        v2 = lam2.integrate(f, box) if lam2 is not EMPTY else 0.0
        return scale * abs(v1 - v2)

    return score


MAX_LEAF_CENTRES = 48


def _centres(lams, budget):
    out = []
    for lam in lams:
        if lam is EMPTY:
            continue
        leaves = lam.sample_leaves(9)
        if len(leaves) > MAX_LEAF_CENTRES:
            idx = np.linspace(0, len(leaves) - 1, MAX_LEAF_CENTRES).round().astype(int)
            leaves = [leaves[i] for i in idx]
        out.extend((g.alpha, g.beta) for g in leaves)
    out.extend(grid_centres(max(4, budget.n_grid // 2)))
    return out


def _gamma_params(gamma):
    """Family parameters (alpha, beta, u) reproducing gamma(Q*)."""
    g = Geodesic.d(*act(gamma, np.array([CENTER_STAR.alpha, CENTER_STAR.beta])))
    from .boxes import family_gamma

    g0 = family_gamma(g.alpha, g.beta, 0.0)
    # gamma = g0 o T_u, so g0^-1 gamma is a translation along the reference centre
    T = inverse(g0) @ gamma
    u = math.log(circle_derivative(T, CENTER_STAR.alpha))
    return (g.alpha, g.beta, u)


@dataclass
class SupResult:
    value: float
    params: tuple = None
    profile: str = None
    evaluations: int = 0
    exhausted: bool = False

    def to_dict(self):
        return {"value": self.value, "params": list(self.params) if self.params else None,
                "profile": self.profile, "evaluations": self.evaluations, "exhausted": self.exhausted}


def _search_pairing(lam1, lam2, profile, scale, budget, extra_gammas=()):
    counter = Counter(budget)
    extra = [_gamma_params(g) for g in extra_gammas]
    score = _pairing_score(lam1, lam2, profile, scale)
    exhausted = False
    try:
        best = maximise_family(score, _centres((lam1, lam2), budget), budget, counter, extra=extra)
    except BudgetExhausted as exc:
        best, exhausted = exc.best, True
    if best is None:
        return SupResult(0.0, None, profile.name, counter.n, True)
    return SupResult(best.value, best.params, profile.name, counter.n, exhausted)


@dataclass
class FrechetResult:
    lower: float
    upper: float
    nu: float
    witness: SupResult = None
    upper_parts: dict = field(default_factory=dict)
    pairings: dict = field(default_factory=dict)

    def to_dict(self):
        return {"lower": self.lower, "upper": self.upper, "nu": self.nu,
                "witness": self.witness.to_dict() if self.witness else None, "upper_parts": self.upper_parts,
                "pairings": {k: v.to_dict() for k, v in self.pairings.items()}}


def _difference(lam1, lam2):
    """Positive and negative parts of lam1 - lam2 for discrete laminations."""
    al = np.concatenate([lam1.alpha, lam2.alpha])
    be = np.concatenate([lam1.beta, lam2.beta])
    w = np.concatenate([lam1.w, -lam2.w])
    lo, hi = np.minimum(al, be), np.maximum(al, be)
    keys = {}
    for x, y, m in zip(lo, hi, w):
        k = (round(x, 13), round(y, 13))
        keys[k] = keys.get(k, 0.0) + m
    pos = [(k, m) for k, m in keys.items() if m > 1e-15]
    neg = [(k, -m) for k, m in keys.items() if m < -1e-15]

    def mk(items):
        if not items:
            return DiscreteLamination([], [], [])
        return DiscreteLamination([k[0] for k, _ in items], [k[1] for k, _ in items], [m for _, m in items],
                                  validate=False)

    return mk(pos), mk(neg)


def _box_sup_upper(lam):
    if lam is EMPTY:
        return 0.0
    if lam.is_discrete:
        return box_sup(lam).value
    return lam.total_mass()


def frechet_norm(lam1, lam2=None, nu=1.0, budget=None, profiles=("bump", "cone"), extra_gammas=()):
    """Interval for the nu-norm of lam1 - lam2 as a functional on nu-test functions."""
    return frechet_norm_grid(lam1, lam2, (nu,), budget, profiles, extra_gammas)[0]


def frechet_norm_grid(lam1, lam2=None, nus=(0.1, 0.25, 0.5, 1.0), budget=None, profiles=("bump", "cone"),
                      extra_gammas=()):
    """frechet_norm for several exponents.

    The pairing search for each profile does not depend on nu (the scale is
    a constant factor), so it runs once per profile.
    """
    for nu in nus:
        _check_nu(nu)
    budget = budget or SearchBudget()
    lam2 = EMPTY if lam2 is None else lam2
    if lam1 is lam2:
        return [FrechetResult(0.0, 0.0, nu) for nu in nus]
    if lam1.is_discrete and lam2.is_discrete:
        pos, neg = _difference(lam1.atomic_part() if lam1 is not EMPTY else lam1,
                               lam2.atomic_part() if lam2 is not EMPTY else lam2)
        parts = {"positive": box_sup(pos).value if len(pos) else 0.0,
                 "negative": box_sup(neg).value if len(neg) else 0.0}
        if len(pos) == 0 and len(neg) == 0:
            return [FrechetResult(0.0, 0.0, nu, upper_parts=parts) for nu in nus]
    else:
        parts = {"first": _box_sup_upper(lam1), "second": _box_sup_upper(lam2)}
    upper = sum(parts.values())
    searches = [(PROFILES[name], _search_pairing(lam1, lam2, PROFILES[name], 1.0, budget, extra_gammas))
                for name in profiles]
    out = []
    for nu in nus:
        best, best_val = None, -1.0
        for prof, r in searches:
            v = profile_scale(prof, nu) * r.value
            if v > best_val:
                best, best_val = r, v
        out.append(FrechetResult(best_val, upper, nu, best, parts, {p.name: r for p, r in searches}))
    return out


def uweak_distance(lam1, lam2, profile=BUMP, budget=None):
    """sup over log-2 boxes Q of |int f o gamma_Q^-1 d(lam1 - lam2)| (a lower estimate)."""
    budget = budget or SearchBudget()
    return _search_pairing(lam1, lam2, profile, 1.0, budget)


def weak_pairing(lam1, lam2, profile):
    """|int f d lam1 - int f d lam2| for a fixed profile on all geodesics."""
    v1 = lam1.integrate(profile) if lam1 is not EMPTY else 0.0
    v2 = lam2.integrate(profile) if lam2 is not EMPTY else 0.0
    return abs(v1 - v2)


def box_frechet_constant(nu):
    """C1 with box_sup <= C1 * (best covering test-function pairing)."""
    N = len(covering_maps())
    return N * (math.pi / 2) ** (1.0 - nu) * BUMP.one_norm


_COVER = None


def covering_maps():
    """Maps eta with eta(Q*_0) covering Q*, built from a partition of Q*."""
    global _COVER
    if _COVER is None:
        from .approx import partition_window

        cells = partition_window(Q_STAR, L_Q_STAR_0).boxes
        maps = []
        for c in cells:
            big = inflate_box(c.with_flags(()), L_Q_STAR_0)
            maps.append(mobius_from_triples(Q_STAR_0.corners[:3], big.corners[:3]))
        _COVER = maps
    return _COVER


def covering_gammas(gamma_Q):
    return [gamma_Q @ eta for eta in covering_maps()]


# ---------------------------------------------------------------------------
# circle vector fields

class CircleVectorField:
    """Real tangent field on the circle, stored as an angular speed v(theta)."""

    def __init__(self, angular, name="field"):
        self.angular = angular
        self.name = name

    def __call__(self, z):
        from .infinitesimal import to_chart

        return to_chart(self.angular(z.angle), z)

    @classmethod
    def h_polynomial(cls, coef):
        """V(x) = sum coef[k] x^k in the half-plane chart (degree <= 2 stays finite at infinity)."""
        coef = [float(c) for c in coef]
        if len(coef) <= 3:
            c = coef + [0.0] * (3 - len(coef))

            def v(t):
                t = np.asarray(t, dtype=float)
                return c[0] * (1 - np.cos(t)) - c[1] * np.sin(t) + c[2] * (1 + np.cos(t))

            return cls(v, f"poly{coef}")
        return cls.from_h(np.polynomial.Polynomial(coef), name=f"poly{coef}")

    @classmethod
    def from_h(cls, fn, at_inf=None, name="field"):
        """Field from a half-plane function V(x); at_inf is the limit of 2V(x)/x^2 at infinity."""
        from .hyp_core import cayley_inv

        def v(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            x = cayley_inv(wrap(t))
            x = np.atleast_1d(x)
            out = np.empty_like(t)
            fin = np.isfinite(x)
            out[fin] = 2.0 * fn(x[fin]) / (1.0 + x[fin] ** 2)
            out[~fin] = math.nan if at_inf is None else at_inf
            return out

        return cls(v, name)

    @classmethod
    def from_lamination(cls, lam, base_point=0j):
        from .earthquake import far_arcs
        from .infinitesimal import arc_field

        a, b = far_arcs(lam, base_point)

        def v(t):
            t = np.asarray(t, dtype=float)
            return sum(w * arc_field(t, x, y) for x, y, w in zip(a, b, lam.w))

        return cls(v, "earthquake")

    def scaled(self, c):
        return CircleVectorField(lambda t: c * self.angular(t), f"{c}*{self.name}")

    def __add__(self, other):
        return CircleVectorField(lambda t: self.angular(t) + other.angular(t), f"{self.name}+{other.name}")

    def pushforward(self, M):
        Mi = inverse(M)

        def v(t):
            s = act(Mi, t)
            return self.angular(s) * circle_derivative(M, s)

        return CircleVectorField(v, f"push({self.name})")


def cross_ratio_derivative(v, a, b, c, d):
    """d/dt log cr(a, b, c, d) when the corners move with angular speeds v."""
    va, vb, vc, vd = v
    cot = lambda x: np.cos(x) / np.sin(x)  # noqa: E731
    return 0.5 * (cot((a - c) / 2) * (va - vc) + cot((b - d) / 2) * (vb - vd)
                  - cot((a - d) / 2) * (va - vd) - cot((b - c) / 2) * (vb - vc))


def field_on_box(V, Q):
    corners = np.array(Q.corners)
    vals = np.asarray(V.angular(corners), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NonFinite("vector field returned a non-finite value")
    return float(cross_ratio_derivative(vals, *corners))


def crossratio_norm(V, budget=None, record=None):
    """sup |V[Q]| over log-2 boxes (a lower estimate)."""
    budget = budget or SearchBudget()
    counter = Counter(budget)

    H = homogeneous(np.array(Q_STAR.corners))

    def score(gamma):
        val = abs(field_on_box(V, Q_STAR.image(gamma)))
        if record is not None:
            record.append(val)
        return val

    def batch(gammas):
        corners = from_homogeneous(np.einsum("nij,jk->ink", gammas, H))
        vals = np.asarray(V.angular(corners.ravel()), dtype=float).reshape(corners.shape)
        if not np.all(np.isfinite(vals)):
            raise NonFinite("vector field returned a non-finite value")
        out = np.abs(cross_ratio_derivative(vals.T, *corners.T))
        if record is not None:
            record.extend(out.tolist())
        return out

    exhausted = False
    try:
        best = maximise_family(score, grid_centres(budget.n_grid), budget, counter, batch=batch)
    except BudgetExhausted as exc:
        best, exhausted = exc.best, True
    if best is None:
        return SupResult(0.0, None, V.name, counter.n, True)
    return SupResult(best.value, best.params, V.name, counter.n, exhausted)


def _second_differences(V, x, t):
    X, T = np.meshgrid(x, t, indexing="ij")

    def v(th):
        return np.asarray(V.angular(wrap(th.ravel())), dtype=float)

    return (v(X + T) + v(X - T) - 2.0 * v(X)) / T.ravel()


QUADRATIC_BASIS = (
    CircleVectorField(lambda s: 1 - np.cos(s), "1"),
    CircleVectorField(lambda s: -np.sin(s), "x"),
    CircleVectorField(lambda s: 1 + np.cos(s), "x^2"),
)


def zygmund_norm(V, n_x=64, n_t=32):
    """Sampled Zygmund seminorm of the angular coefficient, modulo quadratic fields.

    Finite-t second differences of quadratic fields are not zero, so they
    are quotiented out by a minimax fit over the samples (a linear
    program).  ``raw`` is the plain sampled sup.  Both are lower bounds
    for t -> 0 suprema over the full circle.
    """
    x = np.arange(n_x) * TWO_PI / n_x
    t = np.geomspace(1e-3, math.pi / 2, n_t)
    r = _second_differences(V, x, t)
    if not np.all(np.isfinite(r)):
        raise NonFinite("vector field returned a non-finite value")
    B = np.stack([_second_differences(F, x, t) for F in QUADRATIC_BASIS], axis=1)
    raw = float(np.max(np.abs(r)))
    # |r - B c| <= M as two families of linear constraints
    ones = np.ones((len(r), 1))
    A = np.vstack([np.hstack([-B, -ones]), np.hstack([B, -ones])])
    rhs = np.concatenate([-r, r])
    res = linprog(np.array([0, 0, 0, 1.0]), A_ub=A, b_ub=rhs, bounds=[(None, None)] * 4, method="highs")
    if res.success:
        value, coef = float(res.x[3]), res.x[:3]
    else:
        coef, *_ = np.linalg.lstsq(B, r, rcond=None)
        value = float(np.max(np.abs(r - B @ coef)))
    return {"value": max(0.0, value), "raw": raw, "quadratic_part": [float(c) for c in coef]}


# ---------------------------------------------------------------------------
# circle maps

def qs_distortion(h, budget=None):
    """sup over log-2 boxes of |L(h(Q)) - log 2| (a lower estimate).

    Box corners go to h in long double, so maps that keep the dtype resolve
    the thin boxes at the ends of the u sweep well below float64 rounding.
    """
    budget = budget or SearchBudget()
    counter = Counter(budget)
    H = homogeneous(np.array(Q_STAR.corners, dtype=np.longdouble))

    def distortion(img):
        img = np.asarray(img)
        return np.abs(np.asarray(liouville_corners(img[..., 0], img[..., 1], img[..., 2], img[..., 3]),
                                 dtype=float) - LOG2)

    def score(gamma):
        return float(distortion(h(from_homogeneous(gamma @ H))))

    def batch(gammas):
        return distortion(h(from_homogeneous(np.einsum("nij,jk->ink", gammas, H))))

    exhausted = False
    try:
        best = maximise_family(score, grid_centres(budget.n_grid), budget, counter, batch=batch)
    except BudgetExhausted as exc:
        best, exhausted = exc.best, True
    if best is None:
        return SupResult(0.0, None, "qs_distortion", counter.n, True)
    return SupResult(best.value, best.params, "qs_distortion", counter.n, exhausted)


def qs_constant(h, n_x=256, n_t=24):
    """Sampled sup of max(r, 1/r) for images of adjacent equal arcs (angle measure)."""
    x = (np.arange(n_x) + 0.5) * TWO_PI / n_x
    t = np.geomspace(1e-4, math.pi / 2, n_t)
    X, T = np.meshgrid(x, t, indexing="ij")
    hx = np.asarray(h(wrap(X.ravel())), dtype=float)
    hp_ = np.asarray(h(wrap((X + T).ravel())), dtype=float)
    hm = np.asarray(h(wrap((X - T).ravel())), dtype=float)
    right = arc_offset(hp_, hx)
    left = arc_offset(hx, hm)
    r = right / left
    return float(np.max(np.maximum(r, 1.0 / r)))


def box_of(params):
    return family_box(params)
