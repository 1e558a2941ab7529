"""Finite earthquakes: construction, evaluation and measure extraction.

A leaf cuts the plane in two; the side away from the base point is the
far side, and its boundary arc runs counterclockwise from ``a`` to ``b``.
Crossing the leaf outward composes with the translation of length w
along (a -> b), which slides the far arc counterclockwise.
"""

import math
import numpy as np

from .errors import BasePointOnLeaf, NotAnEarthquake
from .hyp_core import (
    TWO_PI,
    IDENTITY,
    Geodesic,
    act,
    arc_offset,
    log_multiplier,
    dp,
    inverse,
    klein,
    metric_circle_angles,
    mobius_from_triples,
    same_map,
    translation_length_axis,
    wrap,
    translation_ld,
)
from .laminations import SIDE_TOL, DiscreteLamination, _side

N_MAX = 10_000


def far_arcs(lam, base_point):
    """Far-side arcs (a, b) of every leaf as seen from ``base_point``."""
    kb = klein(complex(base_point))
    al, be = lam.alpha, lam.beta
    sb = _side(al, be, kb)
    if np.any(np.abs(sb) < SIDE_TOL):
        i = int(np.argmin(np.abs(sb)))
        raise BasePointOnLeaf(f"base point lies on leaf {i}")
    mid = al + arc_offset(be, al) / 2.0
    sm = _side(al, be, np.exp(1j * mid))
    # the arc al -> be is far when its midpoint lies opposite the base point
    far_is_ab = np.sign(sm) != np.sign(sb)
    a = np.where(far_is_ab, al, be)
    b = np.where(far_is_ab, be, al)
    return a, b


class FiniteEarthquake:
    """Left earthquake of a finite lamination, relative to a base stratum."""

    def __init__(self, lam, base_point=0j):
        if not isinstance(lam, DiscreteLamination):
            raise TypeError("finite earthquakes need a DiscreteLamination")
        if len(lam) > N_MAX:
            raise ValueError(f"at most {N_MAX} leaves are supported")
        self.lamination = lam
        self.base_point = complex(base_point)
        n = len(lam)
        self.n = n
        if n == 0:
            self.a = self.b = np.zeros(0)
            self.parent = np.zeros(0, dtype=int)
            self.depth = np.zeros(0, dtype=int)
            self.maps = np.zeros((0, 2, 2))
            self.cut = 0.0
            self.breaks = np.array([0.0])
            self.segment_leaf = np.array([-1])
            return
        a, b = far_arcs(lam, base_point)
        self.a, self.b = a, b
        length = arc_offset(b, a)
        # extended precision: see translation_ld
        self.translations = np.array([translation_ld(x, y, w) for x, y, w in zip(a, b, lam.w)])
        # no far arc has the cut point in its interior
        self.cut = float(a[int(np.argmax(length))])
        s = arc_offset(a, self.cut)
        e = s + length
        e = np.where(np.abs(e - TWO_PI) < 1e-12, TWO_PI, e)
        order = np.lexsort((-length, s))
        parent = np.full(n, -1)
        depth = np.zeros(n, dtype=int)
        maps = np.zeros((n, 2, 2), dtype=np.longdouble)
        stack = []
        for i in order:
            while stack and e[stack[-1]] < e[i] - 1e-12:
                stack.pop()
            if stack:
                parent[i] = stack[-1]
                depth[i] = depth[stack[-1]] + 1
                maps[i] = maps[stack[-1]] @ self.translations[i]
            else:
                maps[i] = self.translations[i]
            stack.append(i)
        self.parent, self.depth, self.maps = parent, depth, maps
        self._s, self._e = s, e
        self._segments(s, e, length)

    def _segments(self, s, e, length):
        # sweep the endpoints: at a tie, ends precede starts, inner ends first, outer starts first
        events = [(float(e[i]), 0, length[i], i) for i in range(self.n)]
        events += [(float(s[i]), 1, -length[i], i) for i in range(self.n)]
        events.sort()
        breaks, leaves = [0.0], [-1]
        stack = []
        k = 0
        while k < len(events):
            pos = events[k][0]
            while k < len(events) and events[k][0] - pos <= 1e-13:
                _, kind, _, i = events[k]
                if kind == 0:
                    stack.remove(i)
                else:
                    stack.append(i)
                k += 1
            top = stack[-1] if stack else -1
            if abs(pos - breaks[-1]) <= 1e-13:
                leaves[-1] = top
            else:
                breaks.append(pos)
                leaves.append(top)
        self.breaks = np.array(breaks)
        self.segment_leaf = np.array(leaves)

    # -- evaluation ---------------------------------------------------------
    def map_of_leaf(self, i):
        return IDENTITY if i < 0 else self.maps[i]

    def stratum_of_angle(self, theta):
        """Deepest leaf whose far arc contains theta (-1 for the base stratum)."""
        off = arc_offset(np.asarray(theta, dtype=float), self.cut)
        idx = np.searchsorted(self.breaks, off, side="right") - 1
        leaf = self.segment_leaf[idx]
        # exactly at a break, prefer the shallower neighbour (the base side)
        at = np.isclose(off, self.breaks[idx], rtol=0, atol=1e-15) & (idx > 0)
        if np.any(at):
            prev = self.segment_leaf[idx - 1]
            dl = np.where(leaf < 0, -1, self.depth[np.maximum(leaf, 0)])
            dp_ = np.where(prev < 0, -1, self.depth[np.maximum(prev, 0)])
            leaf = np.where(at & (dp_ < dl), prev, leaf)
        return leaf

    def eval_angles(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.n == 0:
            return wrap(theta)
        flat = np.atleast_1d(theta).ravel()
        leaf = np.atleast_1d(self.stratum_of_angle(flat))
        out = np.array(wrap(flat), dtype=float)
        for i in np.unique(leaf):
            if i < 0:
                continue
            m = leaf == i
            out[m] = act(self.maps[i], flat[m])
        if theta.ndim == 0:
            return float(out[0])
        return out.reshape(theta.shape)

    def eval_boundary(self, z):
        return dp(self.eval_angles(z.angle)).to(z.chart)

    def stratum_of_point(self, w):
        """Deepest leaf whose far side contains the disk point w."""
        if self.n == 0:
            return -1
        k = klein(complex(w))
        lam = self.lamination
        s = _side(lam.alpha, lam.beta, k)
        sb = _side(lam.alpha, lam.beta, klein(self.base_point))
        far = np.sign(s) * np.sign(sb) < 0
        if not far.any():
            return -1
        idx = np.flatnonzero(far)
        return int(idx[np.argmax(self.depth[idx])])

    def eval_interior(self, w):
        from .hyp_core import act_interior

        return complex(act_interior(self.map_of_leaf(self.stratum_of_point(w)), w))

    def as_table(self):
        """Piecewise-Möbius table of the boundary map: list of (start, end, matrix)."""
        if self.n == 0:
            return PiecewiseMobius([(0.0, TWO_PI, IDENTITY)])
        pieces = []
        br = list(self.breaks) + [TWO_PI]
        for k, leaf in enumerate(self.segment_leaf):
            lo, hi = br[k] + self.cut, br[k + 1] + self.cut
            if br[k + 1] - br[k] <= 1e-15:
                continue
            M = self.map_of_leaf(leaf)
            if pieces and pieces[-1][3] == leaf:
                pieces[-1] = (pieces[-1][0], hi, M, leaf)
            else:
                pieces.append((lo, hi, M, leaf))
        if len(pieces) > 1 and pieces[0][3] == pieces[-1][3]:
            first = pieces.pop(0)
            pieces[-1] = (pieces[-1][0], first[1] + TWO_PI, first[2], first[3])
        return PiecewiseMobius([(lo, hi, M) for lo, hi, M, _ in pieces])

    def comparison_law(self):
        """Axis and length errors of every comparison isometry across a leaf."""
        out = []
        lam = self.lamination
        for i in range(self.n):
            near = self.map_of_leaf(self.parent[i])
            cmp_ = inverse(near) @ self.maps[i]
            L, axis = translation_length_axis(np.asarray(cmp_, dtype=float))
            w = lam.w[i]
            if axis is None:
                out.append({"leaf": i, "axis_err": math.inf, "length_err": math.inf, "left": False})
                continue
            ax_err = max(metric_circle_angles(axis.alpha, self.a[i]), metric_circle_angles(axis.beta, self.b[i]))
            mult = log_multiplier(cmp_, self.a[i])
            out.append({"leaf": i, "axis_err": float(ax_err), "length_err": abs(mult - w) / w,
                        "trace_length_err": abs(L - w) / w, "left": bool(ax_err < 1e-6)})
        return out


def build_earthquake(lam, base_point=0j):
    return FiniteEarthquake(lam, base_point)


def eval_boundary(E, z):
    return E.eval_boundary(z)


def earthquake_path(lam, t, base_point=0j):
    if t < 0:
        raise ValueError("path parameter must be non-negative")
    return FiniteEarthquake(lam.scaled(t), base_point)


# ---------------------------------------------------------------------------
# circle maps

class PiecewiseMobius:
    """Circle map given on consecutive arcs [start, end) by Möbius matrices.

    Starts are increasing lifts; the pieces cover one full turn.
    """

    def __init__(self, pieces):
        pieces = [(float(lo), float(hi), np.asarray(M)) for lo, hi, M in pieces]
        if not pieces:
            raise ValueError("empty table")
        total = sum(hi - lo for lo, hi, _ in pieces)
        if abs(total - TWO_PI) > 1e-9:
            raise ValueError("pieces must cover the circle once")
        self.pieces = pieces
        self.starts = np.array([lo for lo, _, _ in pieces])

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        off = arc_offset(theta, self.starts[0]) + self.starts[0]
        idx = np.searchsorted(self.starts, off, side="right") - 1
        out = np.empty_like(np.atleast_1d(off))
        flat_idx = np.atleast_1d(idx)
        flat = np.atleast_1d(off)
        for k in np.unique(flat_idx):
            m = flat_idx == k
            out[m] = act(self.pieces[k][2], flat[m])
        return float(out[0]) if theta.ndim == 0 else out.reshape(theta.shape)

    def inverse(self):
        """Inverse table; images of consecutive arcs are consecutive for a homeomorphism."""
        out = []
        start = float(wrap(act(self.pieces[0][2], self.pieces[0][0])))
        for lo, hi, M in self.pieces:
            length = float(arc_offset(act(M, hi), act(M, lo))) if hi - lo < TWO_PI else TWO_PI
            out.append((start, start + length, inverse(M)))
            start += length
        return PiecewiseMobius(out)

    def to_dict(self):
        return {"pieces": [{"arc": [lo, hi], "matrix": np.asarray(M, dtype=float).tolist()} for lo, hi, M in self.pieces]}

    @classmethod
    def from_dict(cls, d):
        return cls([(p["arc"][0], p["arc"][1], np.array(p["matrix"])) for p in d["pieces"]])


class CircleMap:
    """An orientation-preserving circle map evaluated on disk angles."""

    def __init__(self, fn, name="map"):
        self.fn = fn
        self.name = name

    def __call__(self, theta):
        return self.fn(theta)

    @classmethod
    def from_earthquake(cls, E):
        return cls(E.eval_angles, "earthquake")

    @classmethod
    def mobius(cls, M):
        return cls(lambda t: act(M, t), "mobius")

    def normalized(self):
        """Post-compose with a Möbius map so that 1, i, -1 are fixed."""
        ref = (0.0, 0.5 * math.pi, math.pi)
        img = tuple(float(self.fn(t)) for t in ref)
        N = mobius_from_triples(img, ref)
        return CircleMap(lambda t: act(N, self.fn(t)), self.name + "/normalized")

    def is_monotone(self, n=10_000):
        t = np.linspace(0.0, TWO_PI, n, endpoint=False)
        v = np.asarray(self.fn(t))
        steps = np.mod(np.diff(np.concatenate([v, v[:1]])), TWO_PI)
        return bool(np.all(steps > 0) and abs(steps.sum() - TWO_PI) < 1e-6)


def extract_measure(table, tol=1e-9):
    """Recover the lamination of a finite left earthquake from its boundary table."""
    pieces = table.pieces
    k = len(pieces)
    found = []
    for j in range(k):
        lo_p, hi_p, Mp = pieces[j - 1] if j > 0 else pieces[-1]
        lo, hi, Mn = pieces[j]
        e = wrap(lo)
        cmp_ = inverse(Mp) @ Mn
        if same_map(cmp_, IDENTITY, tol):
            continue
        L, axis = translation_length_axis(np.asarray(cmp_, dtype=float))
        pair = (j - 1 if j > 0 else k - 1, j)
        if axis is None:
            raise NotAnEarthquake("comparison map is not hyperbolic", pair)
        rep, att = axis.alpha, axis.beta
        if metric_circle_angles(att, e) < 1e-7 and metric_circle_angles(rep, e) >= 1e-7:
            raise NotAnEarthquake("comparison map translates to the right", pair)
        if metric_circle_angles(rep, e) >= 1e-7:
            raise NotAnEarthquake("comparison axis does not end at the break point", pair)
        w = log_multiplier(cmp_, e)
        found.append((e, att, w))
    leaves = []
    used = [False] * len(found)
    for i, (e, f, w) in enumerate(found):
        if used[i]:
            continue
        used[i] = True
        for j in range(i + 1, len(found)):
            e2, f2, w2 = found[j]
            if not used[j] and metric_circle_angles(e2, f) < 1e-7 and metric_circle_angles(f2, e) < 1e-7:
                used[j] = True
                if abs(w2 - w) > 1e-6 * max(1.0, w):
                    raise NotAnEarthquake("the two ends of a leaf disagree on its weight", (i, j))
                w = 0.5 * (w + w2)
                f = e2
                break
        leaves.append((e, f, w))
    if not leaves:
        return DiscreteLamination([], [], [])
    a, b, w = zip(*leaves)
    # both ends of a leaf are break points, which are exact; the eigenvector
    # endpoint is only used to pair them up
    return DiscreteLamination(a, b, w)
