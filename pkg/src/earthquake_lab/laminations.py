"""Measured laminations: discrete ones, continuous bands and their sums.

Every lamination answers the same questions (the oracle interface):
box masses, atoms and peak leaves inside a box, masses of leaves crossing
a segment, integrals of functions of the leaves, and pullbacks.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .boxes import LOG2, GeodesicBox, inflate_box, minimal_box
from .errors import BudgetExhausted, CrossingLeaves, NonFinite
from .hyp_core import (
    EPS_PT,
    TWO_PI,
    Geodesic,
    act,
    arc_offset,
    inverse,
    klein,
    linked_angles,
    metric_circle_angles,
    wrap,
)
from .quadrature import integrate
from .search import Counter, SearchBudget, grid_centres, maximise_family, perpendicular_arcs

ATOM_FLOOR = 1e-15
TOL_Q = 1e-10
SIDE_TOL = 1e-13


def comparison_constants(L0=1.0):
    """Constants of the box-sup / Thurston-norm comparison, computed.

    Leaves crossing an arc of length L0 are pairwise within L0, so they
    fit in the minimal box of the two extreme ones, whose Liouville measure
    is 2 log cosh(L0/2).  When that is at most log 2 the box inflates to a
    log-2 box, giving ||lambda||_Th <= C0 sup_Q lambda(Q) with C0 = 1.
    Conversely the extreme leaves of a log-2 box are within
    2 acosh(sqrt 2) = log((1+sqrt 2)^2), covered by K unit arcs.
    """
    L_box = 2.0 * math.log(math.cosh(L0 / 2.0))
    C0 = 1 if L_box <= LOG2 else math.ceil(L_box / LOG2)
    reach = 2.0 * math.acosh(math.sqrt(2.0))
    K = math.ceil(reach / L0)
    return {"L0": L0, "L_box": L_box, "C0": C0, "log2_reach": reach, "K": K}


def _side(alpha, beta, k):
    """Signed side of the Klein-model point k with respect to the chords (alpha, beta)."""
    A = np.exp(1j * alpha)
    B = np.exp(1j * beta)
    return np.imag(np.conj(B - A) * (k - A))


def _crossing_mask(alpha, beta, P, Q):
    kp = klein(complex(P))
    sp = _side(alpha, beta, kp)
    sp = np.where(np.abs(sp) < SIDE_TOL, 0.0, np.sign(sp))
    if abs(abs(complex(Q)) - 1.0) < 1e-14:
        sq = _side(alpha, beta, complex(Q))
        sq = np.where(np.abs(sq) < SIDE_TOL, 0.0, np.sign(sq))
        return (sp * sq < 0) | ((sp == 0) & (sq != 0))
    sq = _side(alpha, beta, klein(complex(Q)))
    sq = np.where(np.abs(sq) < SIDE_TOL, 0.0, np.sign(sq))
    return (sp * sq < 0) | ((sp == 0) ^ (sq == 0)) | ((sp == 0) & (sq == 0) & (kp != klein(complex(Q))))


def _pair_distance(a1, b1, a2, b2):
    """Distances between disjoint geodesics, vectorised (0 when asymptotic)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        s1 = np.abs(np.sin((a1 - b1) / 2) * np.sin((a2 - b2) / 2)
                    / (np.sin((a1 - b2) / 2) * np.sin((b1 - a2) / 2)))
        s2 = np.abs(np.sin((a1 - b1) / 2) * np.sin((b2 - a2) / 2)
                    / (np.sin((a1 - a2) / 2) * np.sin((b1 - b2) / 2)))
        s = np.fmax(s1, s2)
        d = 2.0 * np.arcsinh(1.0 / np.sqrt(s))
    return np.where(np.isfinite(s), d, 0.0)


@dataclass
class BoxSupResult:
    value: float
    box: object = None
    exact: bool = False
    evaluations: int = 0


@dataclass
class ThurstonInterval:
    lower: float
    upper: float
    C0: int
    box_sup: float
    exact: bool = False
    witness: tuple = None
    notes: list = field(default_factory=list)

    def contains(self, x, tol=0.0):
        return self.lower - tol <= x <= self.upper + tol


class LaminationOracle:
    """Common interface; subclasses implement the primitive queries."""

    is_discrete = False

    def box_mass(self, Q):
        raise NotImplementedError

    def atoms_in(self, Q):
        return []

    def peaks_in(self, Q):
        raise NotImplementedError

    def some_leaf_in(self, Q):
        p = self.peaks_in(Q)
        return p[0] if p else None

    def support_window(self):
        return None

    def total_mass(self):
        raise NotImplementedError

    def integrate(self, f, Q=None):
        """Integral of f(alpha, beta) over the leaves (inside Q when given)."""
        raise NotImplementedError

    def crossing_mass(self, P, Q):
        raise NotImplementedError

    def restrict_segment(self, P, Q):
        raise NotImplementedError

    def pullback(self, M):
        raise NotImplementedError

    def scaled(self, c):
        raise NotImplementedError

    def sample_leaves(self, k=9):
        raise NotImplementedError

    def atomic_part(self):
        return DiscreteLamination([], [], [])

    def continuous_part(self):
        return EMPTY


# ---------------------------------------------------------------------------
# discrete laminations

class DiscreteLamination(LaminationOracle):
    """Finitely many weighted leaves, stored as disk angles."""

    is_discrete = True

    def __init__(self, alpha, beta, w, validate=True):
        a = wrap(np.atleast_1d(np.asarray(alpha, dtype=float)))
        b = wrap(np.atleast_1d(np.asarray(beta, dtype=float)))
        w = np.atleast_1d(np.asarray(w, dtype=float))
        if not (a.shape == b.shape == w.shape):
            raise ValueError("alpha, beta and w must have the same length")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b)) and np.all(np.isfinite(w))):
            raise NonFinite("leaf data must be finite")
        if np.any(w <= 0):
            raise ValueError("leaf weights must be positive")
        if np.any(metric_circle_angles(a, b) <= EPS_PT):
            raise ValueError("a leaf has coincident endpoints")
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        order = np.lexsort((hi, lo))
        lo, hi, w = lo[order], hi[order], w[order]
        keep_lo, keep_hi, keep_w = [], [], []
        for x, y, m in zip(lo, hi, w):
            if keep_lo and metric_circle_angles(x, keep_lo[-1]) <= EPS_PT and \
                    metric_circle_angles(y, keep_hi[-1]) <= EPS_PT:
                keep_w[-1] += m
            else:
                keep_lo.append(x)
                keep_hi.append(y)
                keep_w.append(m)
        self.alpha = np.array(keep_lo)
        self.beta = np.array(keep_hi)
        self.w = np.array(keep_w)
        self._pairs = None
        if validate:
            self.validate()

    @classmethod
    def from_leaves(cls, leaves, validate=True):
        leaves = list(leaves)
        return cls([g.alpha for g, _ in leaves], [g.beta for g, _ in leaves],
                   [w for _, w in leaves], validate)

    @classmethod
    def delta(cls, g, w=1.0):
        return cls([g.alpha], [g.beta], [w])

    def validate(self):
        n = len(self.w)
        for i in range(n - 1):
            bad = linked_angles(self.alpha[i], self.beta[i], self.alpha[i + 1:], self.beta[i + 1:])
            if np.any(bad):
                j = i + 1 + int(np.argmax(bad))
                raise CrossingLeaves(f"leaves {i} and {j} cross")

    def __len__(self):
        return len(self.w)

    @property
    def leaves(self):
        return [(Geodesic.d(a, b), float(m)) for a, b, m in zip(self.alpha, self.beta, self.w)]

    def total_mass(self):
        return float(self.w.sum())

    def box_mass(self, Q):
        return float(self.w[Q.contains(self.alpha, self.beta)].sum())

    def atoms_in(self, Q):
        mask = Q.contains(self.alpha, self.beta) & (self.w >= ATOM_FLOOR)
        return [(Geodesic.d(a, b), float(m)) for a, b, m in zip(self.alpha[mask], self.beta[mask], self.w[mask])]

    def _order_in(self, Q, idx):
        # linear order of nested leaves in a box: along the first arc
        a, b = self.alpha[idx], self.beta[idx]
        first = Q.in_first(a)
        x = np.where(first, a, b)
        y = np.where(first, b, a)
        return np.lexsort((-arc_offset(y, Q.c), arc_offset(x, Q.a)))

    def peaks_in(self, Q):
        idx = np.flatnonzero(Q.contains(self.alpha, self.beta))
        if len(idx) == 0:
            return []
        idx = idx[self._order_in(Q, idx)]
        ends = [idx[0]] if len(idx) == 1 else [idx[0], idx[-1]]
        return [Geodesic.d(self.alpha[i], self.beta[i]) for i in ends]

    def support_window(self):
        if len(self.w) == 0:
            return None
        return _window_from_leaves(self.alpha, self.beta)

    def integrate(self, f, Q=None):
        if len(self.w) == 0:
            return 0.0
        if Q is None:
            return float(np.dot(self.w, f(self.alpha, self.beta)))
        m = Q.contains(self.alpha, self.beta)
        if not m.any():
            return 0.0
        return float(np.dot(self.w[m], f(self.alpha[m], self.beta[m])))

    def crossing_mask(self, P, Q):
        return _crossing_mask(self.alpha, self.beta, P, Q)

    def crossing_mass(self, P, Q):
        if len(self.w) == 0:
            return 0.0
        return float(self.w[self.crossing_mask(P, Q)].sum())

    def subset(self, mask):
        out = DiscreteLamination.__new__(DiscreteLamination)
        out.alpha, out.beta, out.w = self.alpha[mask], self.beta[mask], self.w[mask]
        out._pairs = None
        return out

    def restrict_segment(self, P, Q):
        return self.subset(self.crossing_mask(P, Q))

    def pullback(self, M):
        Mi = inverse(M)
        return DiscreteLamination(act(Mi, self.alpha), act(Mi, self.beta), self.w.copy(), validate=False)

    def pushforward(self, M):
        return DiscreteLamination(act(M, self.alpha), act(M, self.beta), self.w.copy(), validate=False)

    def scaled(self, c):
        if c == 0:
            return DiscreteLamination([], [], [])
        return DiscreteLamination(self.alpha, self.beta, self.w * c, validate=False)

    def sample_leaves(self, k=None):
        return [Geodesic.d(a, b) for a, b in zip(self.alpha, self.beta)]

    def atomic_part(self):
        return self.subset(self.w >= ATOM_FLOOR)

    def continuous_part(self):
        return EMPTY

    def __add__(self, other):
        return DiscreteLamination(np.concatenate([self.alpha, other.alpha]),
                                  np.concatenate([self.beta, other.beta]),
                                  np.concatenate([self.w, other.w]))

    # -- exact pair tables ------------------------------------------------
    def pair_tables(self):
        """Distances and minimal-box masses for every pair of leaves.

        The closed minimal box of leaves i and j holds exactly the leaves
        separating them (plus i and j), so its mass is read off a side matrix.
        """
        if self._pairs is not None:
            return self._pairs
        a, b, w = self.alpha, self.beta, self.w
        A, B = a[:, None], b[:, None]
        # side of leaf i relative to leaf k: +1 when an endpoint of i lies inside the arc a_k -> b_k
        inside_a = _open_arc(a[None, :], A, B)
        inside_b = _open_arc(b[None, :], A, B)
        outside_a = _open_arc(a[None, :], B, A)
        outside_b = _open_arc(b[None, :], B, A)
        S = np.where(inside_a | inside_b, 1.0, np.where(outside_a | outside_b, -1.0, 0.0))
        # S_kk = 0 and S_ki = +-1 otherwise, so sum_k w_k (1 - S_ki S_kj)/2 counts
        # every separating leaf plus half of leaves i and j themselves
        T = 0.5 * (w.sum() - (S.T * w) @ S)
        mass = T + 0.5 * (w[:, None] + w[None, :])
        np.fill_diagonal(mass, w)
        D = _pair_distance(a[:, None], b[:, None], a[None, :], b[None, :])
        np.fill_diagonal(D, 0.0)
        self._pairs = (D, mass)
        return self._pairs


def _open_arc(x, s, e):
    off = arc_offset(x, s)
    length = arc_offset(e, s)
    return (off > EPS_PT) & (off < length - EPS_PT)


def _window_from_leaves(alpha, beta):
    """Smallest box, in the sense of arc length, containing all the given leaves, or None."""
    ends = np.sort(np.concatenate([alpha, beta]))
    gaps = np.diff(np.concatenate([ends, [ends[0] + TWO_PI]]))
    order = np.argsort(-gaps)
    for i in order[:6]:
        for j in order[:6]:
            if i == j:
                continue
            # the two gaps split the endpoints into two arcs; every leaf must join them
            s1, e1 = ends[(i + 1) % len(ends)], ends[j]
            s2, e2 = ends[(j + 1) % len(ends)], ends[i]
            try:
                Q = GeodesicBox.d_(s1, e1, s2, e2)
            except ValueError:
                continue
            if np.all(Q.contains(alpha, beta)):
                return Q
    return None


# ---------------------------------------------------------------------------
# continuous bands

def _poly(spec):
    fam = spec.get("family")
    coef = spec.get("coef")
    if fam not in ("affine", "polynomial") or coef is None:
        raise ValueError(f"unknown function spec {spec!r}")
    if fam == "affine" and len(coef) != 2:
        raise ValueError("affine spec needs two coefficients")
    return Polynomial([float(c) for c in coef])


class _Lifted:
    """Continuous lift of t -> M.f(t) for a monotone angle function f."""

    def __init__(self, f, M, t0=0.0, t1=1.0):
        self.f, self.M = f, M
        f0, f1 = float(f(t0)), float(f(t1))
        self.dir = 1.0 if f1 >= f0 else -1.0
        self.ref = float(act(M, f0))

    def __call__(self, t):
        raw = act(self.M, self.f(t))
        d = self.dir * (raw - self.ref)
        return self.ref + self.dir * (np.mod(d + 1e-9, TWO_PI) - 1e-9)


class BandLamination(LaminationOracle):
    """Leaves l(t) = (alpha(t), beta(t)), t in [0, 1], with density rho(t).

    alpha and beta are continuous monotone lifts (unwrapped angles).
    ``support`` restricts the parameter to a union of intervals.
    """

    def __init__(self, alpha, beta, rho, tol_q=TOL_Q, validate=True, spec=None, support=None):
        self.alpha_f, self.beta_f, self.rho = alpha, beta, rho
        self.tol_q = tol_q
        self.spec = spec
        self.support = [(0.0, 1.0)] if support is None else [tuple(map(float, s)) for s in support]
        self._ranges = []
        for f in (alpha, beta):
            f0, f1 = float(f(0.0)), float(f(1.0))
            if abs(f1 - f0) >= TWO_PI:
                raise ValueError("endpoint functions must sweep less than a full turn")
            self._ranges.append((f0, f1))
        if validate:
            self.validate()

    @classmethod
    def from_specs(cls, alpha, beta, rho, tol_q=TOL_Q):
        spec = {"alpha": alpha, "beta": beta, "rho": rho}
        return cls(_poly(alpha), _poly(beta), _poly(rho), tol_q=tol_q, spec=spec)

    def validate(self, n_pairs=1000, seed=0):
        rng = np.random.default_rng(seed)
        t = np.linspace(0.0, 1.0, 65)
        for f in (self.alpha_f, self.beta_f):
            v = f(t)
            dv = np.diff(v)
            if not (np.all(dv >= -1e-12) or np.all(dv <= 1e-12)):
                raise ValueError("endpoint functions must be monotone")
        if np.any(np.asarray(self.rho(t)) < 0):
            raise ValueError("density must be non-negative")
        s, u = rng.random(n_pairs), rng.random(n_pairs)
        bad = linked_angles(self.alpha_f(s), self.beta_f(s), self.alpha_f(u), self.beta_f(u), tol=1e-12)
        if np.any(bad):
            raise CrossingLeaves("band leaves cross")

    def leaf(self, t):
        return Geodesic.d(float(self.alpha_f(t)), float(self.beta_f(t)))

    def _with_support(self, support):
        out = BandLamination.__new__(BandLamination)
        out.__dict__.update(self.__dict__)
        out.support = support
        return out

    # -- parameter sets ----------------------------------------------------
    def _inverse(self, f, rng, u):
        f0, f1 = rng
        if abs(u - f0) <= 1e-15:
            return 0.0
        if abs(u - f1) <= 1e-15:
            return 1.0
        return brentq(lambda t: float(f(t)) - u, 0.0, 1.0, xtol=1e-15, rtol=1e-15)

    def _arc_tset(self, which, s, e, point):
        if point:
            return []
        f = self.alpha_f if which == 0 else self.beta_f
        rng = self._ranges[which]
        lo, hi = min(rng), max(rng)
        length = float(arc_offset(e, s))
        out = []
        k0 = math.floor((lo - s - length) / TWO_PI)
        k1 = math.ceil((hi - s) / TWO_PI)
        for k in range(k0, k1 + 1):
            S = s + TWO_PI * k
            u0, u1 = max(S, lo), min(S + length, hi)
            if u0 <= u1:
                t0, t1 = sorted((self._inverse(f, rng, u0), self._inverse(f, rng, u1)))
                out.append((t0, t1))
        return out

    def tset(self, Q):
        fl = Q.flags
        pa, pc = "point_ab" in fl, "point_cd" in fl
        ia = self._arc_tset(0, Q.a, Q.b, pa)
        ib = self._arc_tset(1, Q.c, Q.d, pc)
        ja = self._arc_tset(0, Q.c, Q.d, pc)
        jb = self._arc_tset(1, Q.a, Q.b, pa)
        parts = _intersect(ia, ib) + _intersect(ja, jb)
        return _intersect(_merge(parts), self.support)

    def _mass_on(self, intervals):
        total = 0.0
        anti = self.rho.integ() if isinstance(self.rho, Polynomial) else None
        for t0, t1 in intervals:
            if anti is not None:
                total += float(anti(t1) - anti(t0))
            else:
                total += integrate(self.rho, t0, t1, self.tol_q)[0]
        return total

    def box_mass(self, Q):
        return self._mass_on(self.tset(Q))

    def total_mass(self):
        return self._mass_on(self.support)

    def peaks_in(self, Q):
        ts = self.tset(Q)
        ts = [(a, b) for a, b in ts if self._mass_on([(a, b)]) > 0 or a < b]
        if not ts:
            return []
        t0, t1 = ts[0][0], ts[-1][1]
        if t1 - t0 <= 1e-15:
            return [self.leaf(t0)]
        return [self.leaf(t0), self.leaf(t1)]

    def support_window(self):
        (a0, a1), (b0, b1) = self._ranges
        alo, ahi = min(a0, a1), max(a0, a1)
        blo, bhi = min(b0, b1), max(b0, b1)
        for box in ((alo, ahi, blo, bhi), (blo, bhi, alo, ahi)):
            try:
                Q = GeodesicBox.d_(*box)
            except ValueError:
                continue
            if arc_offset(box[1], box[0]) + 1e-12 >= ahi - alo - 1e-12 or True:
                t = np.linspace(0, 1, 33)
                if np.all(Q.contains(self.alpha_f(t), self.beta_f(t))):
                    return Q
        return None

    def integrate(self, f, Q=None):
        intervals = self.support if Q is None else self.tset(Q)

        def g(t):
            return self.rho(t) * f(wrap(self.alpha_f(t)), wrap(self.beta_f(t)))

        return float(sum(integrate(g, t0, t1, self.tol_q)[0] for t0, t1 in intervals))

    def crossing_tset(self, P, Q, n_grid=257):
        t = np.linspace(0.0, 1.0, n_grid)

        def side(k, tt):
            return _side(self.alpha_f(tt), self.beta_f(tt), k)

        kp = klein(complex(P))
        kq = complex(Q) if abs(abs(complex(Q)) - 1.0) < 1e-14 else klein(complex(Q))
        roots = [0.0, 1.0]
        for k in (kp, kq):
            h = side(k, t)
            for i in np.flatnonzero(np.sign(h[:-1]) * np.sign(h[1:]) < 0):
                roots.append(brentq(lambda x: float(side(k, x)), t[i], t[i + 1], xtol=1e-15))
            roots.extend(t[np.abs(h) < SIDE_TOL])
        roots = np.unique(roots)
        out = []
        for lo, hi in zip(roots[:-1], roots[1:]):
            m = 0.5 * (lo + hi)
            if side(kp, m) * side(kq, m) < 0:
                out.append((float(lo), float(hi)))
        return _intersect(_merge(out), self.support)

    def crossing_mass(self, P, Q):
        return self._mass_on(self.crossing_tset(P, Q))

    def restrict_segment(self, P, Q):
        return self._with_support(self.crossing_tset(P, Q))

    def restrict_t(self, intervals):
        return self._with_support(_intersect(_merge(list(intervals)), self.support))

    def pullback(self, M):
        Mi = inverse(M)
        out = BandLamination(_Lifted(self.alpha_f, Mi), _Lifted(self.beta_f, Mi), self.rho,
                             tol_q=self.tol_q, validate=False, support=self.support)
        return out

    def scaled(self, c):
        rho = self.rho * c if isinstance(self.rho, Polynomial) else (lambda t, r=self.rho: c * r(t))
        out = self._with_support(self.support)
        out.rho = rho
        return out

    def sample_leaves(self, k=9):
        ts = []
        for t0, t1 in self.support:
            ts.extend(np.linspace(t0, t1, k))
        return [self.leaf(t) for t in ts]

    def continuous_part(self):
        return self


def _merge(intervals):
    iv = sorted(intervals)
    out = []
    for a, b in iv:
        if out and a <= out[-1][1] + 1e-15:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def _intersect(I, J):
    out = []
    for a, b in I:
        for c, d in J:
            lo, hi = max(a, c), min(b, d)
            if lo <= hi:
                out.append((lo, hi))
    return _merge(out)


# ---------------------------------------------------------------------------
# sums

class SumLamination(LaminationOracle):
    """Sum of non-crossing parts (for instance atoms plus a band)."""

    def __init__(self, parts):
        self.parts = [p for p in parts if p is not EMPTY]

    @property
    def is_discrete(self):
        return all(p.is_discrete for p in self.parts)

    def box_mass(self, Q):
        return sum(p.box_mass(Q) for p in self.parts)

    def atoms_in(self, Q):
        return [a for p in self.parts for a in p.atoms_in(Q)]

    def peaks_in(self, Q):
        leaves = [g for p in self.parts for g in p.peaks_in(Q)]
        if len(leaves) <= 2:
            return leaves
        al = np.array([g.alpha for g in leaves])
        be = np.array([g.beta for g in leaves])
        first = Q.in_first(al)
        x = np.where(first, al, be)
        y = np.where(first, be, al)
        order = np.lexsort((-arc_offset(y, Q.c), arc_offset(x, Q.a)))
        return [leaves[order[0]], leaves[order[-1]]]

    def support_window(self):
        ws = [p.support_window() for p in self.parts]
        if any(w is None for w in ws) or not ws:
            return None
        corners = np.array([c for w in ws for c in w.corners])
        return _window_from_leaves(corners[0::2], corners[1::2]) if len(ws) > 1 else ws[0]

    def total_mass(self):
        return sum(p.total_mass() for p in self.parts)

    def integrate(self, f, Q=None):
        return sum(p.integrate(f, Q) for p in self.parts)

    def crossing_mass(self, P, Q):
        return sum(p.crossing_mass(P, Q) for p in self.parts)

    def restrict_segment(self, P, Q):
        return SumLamination([p.restrict_segment(P, Q) for p in self.parts])

    def pullback(self, M):
        return SumLamination([p.pullback(M) for p in self.parts])

    def scaled(self, c):
        return SumLamination([p.scaled(c) for p in self.parts])

    def sample_leaves(self, k=9):
        return [g for p in self.parts for g in p.sample_leaves(k)]

    def atomic_part(self):
        out = DiscreteLamination([], [], [])
        for p in self.parts:
            if p.is_discrete:
                out = out + p.atomic_part()
        return out

    def continuous_part(self):
        cont = [p for p in self.parts if not p.is_discrete]
        if not cont:
            return EMPTY
        return cont[0] if len(cont) == 1 else SumLamination(cont)


class _Empty(DiscreteLamination):
    def __init__(self):
        super().__init__([], [], [])


EMPTY = _Empty()


@dataclass
class RestrictedMeasure(LaminationOracle):
    """A lamination restricted to the leaves crossing a segment or ray."""

    base: LaminationOracle
    selector: tuple
    inner: LaminationOracle

    @property
    def is_discrete(self):
        return self.inner.is_discrete

    def box_mass(self, Q):
        return self.inner.box_mass(Q)

    def atoms_in(self, Q):
        return self.inner.atoms_in(Q)

    def peaks_in(self, Q):
        return self.inner.peaks_in(Q)

    def total_mass(self):
        return self.inner.total_mass()

    def integrate(self, f, Q=None):
        return self.inner.integrate(f, Q)

    def crossing_mass(self, P, Q):
        return self.inner.crossing_mass(P, Q)

    def support_window(self):
        return self.inner.support_window()

    def sample_leaves(self, k=9):
        return self.inner.sample_leaves(k)


def restrict(lam, P, Q):
    """Leaves of lam crossing the segment from P to Q (disk points; |Q| = 1 for a ray)."""
    return RestrictedMeasure(lam, (complex(P), complex(Q)), lam.restrict_segment(P, Q))


def box_mass(lam, Q):
    return lam.box_mass(Q)


def pullback(M, lam):
    return lam.pullback(M)


# ---------------------------------------------------------------------------
# sup of box masses and the Thurston norm

def box_sup(lam, budget=None):
    """sup of lam(Q) over boxes of Liouville measure log 2.

    Exact for discrete laminations; a lower estimate otherwise.
    """
    budget = budget or SearchBudget()
    if lam.is_discrete:
        return _box_sup_discrete(_as_discrete(lam))
    return _box_sup_search(lam, budget)


def _as_discrete(lam):
    if isinstance(lam, DiscreteLamination):
        return lam
    return lam.atomic_part()


REACH_LOG2 = 2.0 * math.acosh(math.sqrt(2.0))


def _box_sup_discrete(lam):
    if len(lam) == 0:
        return BoxSupResult(0.0, None, True, 0)
    D, mass = lam.pair_tables()
    ok = D <= REACH_LOG2 + 1e-12
    masked = np.where(ok, mass, -np.inf)
    i, j = np.unravel_index(int(np.argmax(masked)), masked.shape)
    gi, gj = Geodesic.d(lam.alpha[i], lam.beta[i]), Geodesic.d(lam.alpha[j], lam.beta[j])
    box = inflate_box(minimal_box(gi, gj)) if i != j else _box_around(gi)
    return BoxSupResult(float(masked[i, j]), box, True, int(D.size))


def _box_around(g):
    from .boxes import family_gamma, Q_STAR

    return Q_STAR.image(family_gamma(g.alpha, g.beta, 0.0))


def _box_sup_search(lam, budget, extra_boxes=()):
    counter = Counter(budget)
    centres = [(g.alpha, g.beta) for g in lam.sample_leaves(9)]
    n = max(4, budget.n_grid // 2)
    centres += grid_centres(n)

    def score(gamma):
        from .boxes import Q_STAR

        return lam.box_mass(Q_STAR.image(gamma))

    try:
        best = maximise_family(score, centres, budget, counter)
    except BudgetExhausted as exc:
        best = exc.best
    from .search import family_box

    value, box = best.value, family_box(best.params)
    for B in extra_boxes:
        m = lam.box_mass(B)
        if m > value:
            value, box = m, B
    return BoxSupResult(value, box, False, counter.n)


def thurston_norm(lam, budget=None):
    """Interval containing the Thurston norm sup over unit arcs of the crossing mass."""
    budget = budget or SearchBudget()
    C0 = comparison_constants()["C0"]
    if lam.is_discrete:
        d = _as_discrete(lam)
        if len(d) == 0:
            return ThurstonInterval(0.0, 0.0, C0, 0.0, True)
        D, mass = d.pair_tables()
        masked = np.where(D <= 1.0 + 1e-12, mass, -np.inf)
        i, j = np.unravel_index(int(np.argmax(masked)), masked.shape)
        th = float(masked[i, j])
        bs = _box_sup_discrete(d).value
        return ThurstonInterval(th, max(th, C0 * bs), C0, bs, True, witness=(int(i), int(j)))
    lower, arc = _thurston_arcs(lam, budget)
    extra = []
    if arc is not None:
        peaks = lam.restrict_segment(*arc).peaks_in(lam.support_window()) if lam.support_window() else []
        if len(peaks) == 2:
            try:
                extra.append(inflate_box(minimal_box(*peaks)))
            except ValueError:
                pass
        elif len(peaks) == 1:
            extra.append(_box_around(peaks[0]))
    bs = _box_sup_search(lam, budget, extra)
    notes = ["upper bound uses a searched box sup (a lower estimate of the true sup)"]
    return ThurstonInterval(lower, C0 * bs.value, C0, bs.value, False, witness=arc, notes=notes)


def _thurston_arcs(lam, budget):
    best, arc = 0.0, None
    feet = np.linspace(-4.0, 4.0, 17)
    starts = np.linspace(-1.0, 0.0, 5)
    for g in lam.sample_leaves(9):
        for r0 in starts:
            P, Q = perpendicular_arcs(g.alpha, g.beta, feet, r0, r0 + 1.0)
            for p, q in zip(np.atleast_1d(P), np.atleast_1d(Q)):
                m = lam.crossing_mass(p, q)
                if m > best + 1e-15:
                    best, arc = m, (complex(p), complex(q))
    return best, arc
