"""Discretization of bounded laminations by finitely many weighted leaves."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .boxes import LOG2, TOL_L, GeodesicBox, boxes_meet, box_inside, liouville, minimal_box
from .errors import OracleInconsistent, WindowRequired
from .hyp_core import EPS_PT, TWO_PI, Geodesic, geodesics_close, arc_offset, metric_circle_angles, wrap
from .laminations import (
    ATOM_FLOOR,
    EMPTY,
    BandLamination,
    DiscreteLamination,
    box_sup,
    thurston_norm,
)


# relative mass below which a cell of the continuous part counts as rounding dust
DUST = 1e-12


@dataclass
class BoxPartition:
    window: GeodesicBox
    boxes: list
    max_L: float

    def __len__(self):
        return len(self.boxes)

    def box_masses(self, lam):
        return np.array([lam.box_mass(B) for B in self.boxes])


def _split(B):
    """Halve the longer arc; the left half is open at the cut so halves stay disjoint."""
    a, b, c, d = B.corners
    fl = set(B.flags)
    l1, l2 = B.arc_lengths()
    if l1 >= l2:
        m = wrap(a + l1 / 2)
        left = GeodesicBox.d_(a, m, c, d, (fl - {"open_b"}) | {"open_b"})
        right = GeodesicBox.d_(m, b, c, d, fl - {"open_a"})
    else:
        m = wrap(c + l2 / 2)
        left = GeodesicBox.d_(a, b, c, m, (fl - {"open_d"}) | {"open_d"})
        right = GeodesicBox.d_(a, b, m, d, fl - {"open_c"})
    return left, right


def partition_window(window, max_L, max_depth=40):
    """Dyadic partition of window into cells of Liouville measure at most max_L."""
    if max_L > LOG2 + TOL_L:
        raise ValueError("cells must have Liouville measure at most log 2")
    out = []
    stack = [(window, 0)]
    while stack:
        B, depth = stack.pop()
        if liouville(B, allow_degenerate=True) <= max_L + TOL_L or depth >= max_depth:
            out.append(B)
        else:
            left, right = _split(B)
            stack.append((right, depth + 1))
            stack.append((left, depth + 1))
    return BoxPartition(window, out, max_L)


def refine(partition, lam, n, max_depth=40):
    """Split cells until each carries lam-mass below 1/n."""
    out = []
    stack = [(B, 0) for B in reversed(partition.boxes)]
    while stack:
        B, depth = stack.pop()
        m = lam.box_mass(B)
        if m < 1.0 / n or depth >= max_depth:
            out.append(B)
        else:
            left, right = _split(B)
            stack.append((right, depth + 1))
            stack.append((left, depth + 1))
    return BoxPartition(partition.window, out, partition.max_L)


def _closed(B):
    return B.with_flags(B.flags & {"point_ab", "point_cd"})


def peak_shrink(B, lam):
    """Sub-box of B spanned by the peak leaves of lam in B.

    Returns (box, atom).  box is None when B meets no leaf or a single
    leaf; a single atom is handed back as ``atom`` so it can join the
    atomic part.
    """
    peaks = lam.peaks_in(B)
    closed = _closed(B)
    for g in peaks:
        if not closed.contains_geodesic(g):
            raise OracleInconsistent(f"peak {g!r} lies outside {B!r}")
    if not peaks:
        return None, None
    if len(peaks) == 1 or geodesics_close(peaks[0], peaks[1], EPS_PT):
        g = peaks[0]
        for atom, w in lam.atoms_in(B):
            if atom == g:
                return None, (atom, w)
        return None, None
    return minimal_box(peaks[0], peaks[1]), None


def _chosen_leaf(lam, B, peaks_box):
    """A leaf of lam inside B (the middle band leaf when available, else a peak)."""
    if isinstance(lam, BandLamination):
        ts = [(t0, t1) for t0, t1 in lam.tset(B) if t1 > t0]
        if ts:
            t0, t1 = max(ts, key=lambda I: I[1] - I[0])
            g = lam.leaf(0.5 * (t0 + t1))
            if B.contains_geodesic(g):
                return g
    for g in lam.peaks_in(B):
        if B.contains_geodesic(g):
            return g
    return lam.some_leaf_in(B)


@dataclass
class LedgerRow:
    box: GeodesicBox
    mass: float
    leaf: Geodesic
    peak_box: GeodesicBox = None

    def to_dict(self):
        return {"box": list(self.box.corners), "flags": sorted(self.box.flags), "mass": self.mass,
                "leaf": [self.leaf.alpha, self.leaf.beta] if self.leaf is not None else None,
                "peak_box": list(self.peak_box.corners) if self.peak_box is not None else None}


@dataclass
class DiscretizationReport:
    n: int
    lam_n: DiscreteLamination
    ledger: list
    atoms_kept: int
    atom_tail: float
    box_sup_n: float
    box_sup_input: float
    thurston: dict = field(default_factory=dict)
    dust: float = 0.0

    @property
    def box_sup_bound(self):
        return 2.0 * self.box_sup_input + 2.0

    def to_dict(self):
        return {"n": self.n, "leaves": len(self.lam_n), "atoms_kept": self.atoms_kept,
                "atom_tail": self.atom_tail, "box_sup_n": self.box_sup_n, "box_sup_input": self.box_sup_input,
                "box_sup_bound": self.box_sup_bound, "thurston": self.thurston, "dust": self.dust,
                "ledger": [r.to_dict() for r in self.ledger]}


def _split_atoms(lam, n):
    atoms = lam.atomic_part()
    if len(atoms) == 0:
        return atoms, 0.0
    trimmed = atoms.w < ATOM_FLOOR
    tail = float(atoms.w[trimmed].sum())
    if tail >= 1.0 / n:
        raise ValueError("atom tail does not fit under 1/n")
    return atoms.subset(~trimmed), tail


def discretize(lam, n, max_L=LOG2, budget=None):
    """Replace the continuous part of lam by Dirac masses on boxes of mass < 1/n."""
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    n = int(n)
    atoms, tail = _split_atoms(lam, n)
    cont = lam.continuous_part() if not isinstance(lam, DiscreteLamination) else EMPTY
    ledger, dust = [], 0.0
    if cont is not EMPTY and cont.total_mass() > 0:
        window = cont.support_window()
        if window is None:
            raise WindowRequired("the continuous part needs a compact support window")
        cells = refine(partition_window(window, max_L), cont, n)
        total = cont.total_mass()
        for B in cells.boxes:
            m = cont.box_mass(B)
            if m <= DUST * total:
                # cells touching the band only along an open side carry rounding dust
                dust += max(m, 0.0)
                continue
            shrunk, _ = peak_shrink(B, cont)
            g = _chosen_leaf(cont, B, shrunk)
            if g is None:
                raise OracleInconsistent(f"box {B!r} has mass {m} but no leaf")
            ledger.append(LedgerRow(B, m, g, shrunk))
    al = np.concatenate([atoms.alpha, [r.leaf.alpha for r in ledger]])
    be = np.concatenate([atoms.beta, [r.leaf.beta for r in ledger]])
    w = np.concatenate([atoms.w, [r.mass for r in ledger]])
    lam_n = DiscreteLamination(al, be, w, validate=False)
    bs_n = box_sup(lam_n).value
    bs = box_sup(lam, budget).value
    th_n = thurston_norm(lam_n)
    return DiscretizationReport(n, lam_n, ledger, len(atoms), tail, bs_n, bs,
                                {"lambda_n": [th_n.lower, th_n.upper]}, dust)


def _arcs_meet(s1, e1, s2, e2):
    l1, l2 = arc_offset(e1, s1), arc_offset(e2, s2)
    return (arc_offset(s2, s1) <= l1 + 1e-12) | (arc_offset(s1, s2) <= l2 + 1e-12)


def _arc_inside(s1, e1, s2, e2):
    l1, l2 = arc_offset(e1, s1), arc_offset(e2, s2)
    o = arc_offset(s1, s2)
    o = np.where(o > TWO_PI - 1e-12, 0.0, o)
    return o + l1 <= l2 + 1e-12


def overlap_census(boxes, Q):
    """Number of boxes meeting Q without lying inside it (closed boxes)."""
    if not boxes:
        return 0
    C = np.array([B.corners for B in boxes])
    a, b, c, d = C.T
    meet = (_arcs_meet(a, b, Q.a, Q.b) & _arcs_meet(c, d, Q.c, Q.d)) | \
        (_arcs_meet(a, b, Q.c, Q.d) & _arcs_meet(c, d, Q.a, Q.b))
    inside = (_arc_inside(a, b, Q.a, Q.b) & _arc_inside(c, d, Q.c, Q.d)) | \
        (_arc_inside(a, b, Q.c, Q.d) & _arc_inside(c, d, Q.a, Q.b))
    return int(np.sum(meet & ~inside))


def overlap_census_slow(boxes, Q):
    return sum(1 for B in boxes if boxes_meet(B, Q) and not box_inside(B, Q))


def is_leaf(lam, g, tol=1e-9):
    """Membership of g in the support of lam, by direct endpoint matching."""
    if isinstance(lam, DiscreteLamination):
        d1 = metric_circle_angles(lam.alpha, g.alpha) + metric_circle_angles(lam.beta, g.beta)
        d2 = metric_circle_angles(lam.alpha, g.beta) + metric_circle_angles(lam.beta, g.alpha)
        return bool(np.any(np.minimum(d1, d2) <= tol))
    if isinstance(lam, BandLamination):
        for x, y in ((g.alpha, g.beta), (g.beta, g.alpha)):
            for t0, t1 in lam.support:
                f = lambda t: float(arc_offset(x, lam.alpha_f(t) + math.pi)) - math.pi  # noqa: E731
                f0, f1 = f(t0), f(t1)
                if f0 * f1 > 0:
                    continue
                t = brentq(f, t0, t1, xtol=1e-15) if f0 != 0 else t0
                if metric_circle_angles(lam.beta_f(t), y) <= tol:
                    return True
        return False
    parts = getattr(lam, "parts", None)
    if parts is not None:
        return any(is_leaf(p, g, tol) for p in parts)
    raise TypeError(f"no membership test for {type(lam).__name__}")


def peak_boxes(report):
    return [r.peak_box for r in report.ledger if r.peak_box is not None]
