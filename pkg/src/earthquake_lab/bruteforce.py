"""Brute-force oracles for the Thurston norm and the log-2 box sup of discrete laminations.

Distances between leaves come from sampling both geodesics by arclength
(coarse grid, then a 1e-3 grid around the coarse minimum); crossing masses
come from a Klein-model sign test.  Sampling only overestimates distances,
so every pair whose sampled distance is under a threshold truly is; pairs
within ``slack`` above it might be.  The results are therefore intervals.
"""

import math

import numpy as np

from .boxes import OMEGA0, inflate_box, minimal_box
from .hyp_core import Geodesic, arc_offset


def leaf_points(alpha, beta, s):
    """Points at signed arclength s from the point of the leaf nearest the origin."""
    off = arc_offset(beta, alpha)
    if off > math.pi:
        alpha, off = beta, 2 * math.pi - off
    half = off / 2.0
    m = alpha + half
    r0 = (1.0 - math.sin(half)) / math.cos(half)
    it = 1j * np.tanh(np.asarray(s, dtype=float) / 2.0)
    return np.exp(1j * m) * (it + r0) / (1.0 + r0 * it)


def _dist(z, w):
    return 2.0 * np.arctanh(np.minimum(np.abs(z - w) / np.abs(1.0 - np.conj(w) * z), 1.0 - 1e-16))


def sampled_distance(g, h, span=12.0, coarse=0.1, fine=1e-3):
    s = np.arange(-span, span + coarse / 2, coarse)
    P, Q = leaf_points(g.alpha, g.beta, s), leaf_points(h.alpha, h.beta, s)
    D = _dist(P[:, None], Q[None, :])
    i, j = np.unravel_index(int(np.argmin(D)), D.shape)
    sf = np.arange(-1.5 * coarse, 1.5 * coarse + fine / 2, fine)
    P = leaf_points(g.alpha, g.beta, s[i] + sf)
    Q = leaf_points(h.alpha, h.beta, s[j] + sf)
    D = _dist(P[:, None], Q[None, :])
    k, l = np.unravel_index(int(np.argmin(D)), D.shape)
    return float(D[k, l]), complex(P[k]), complex(Q[l])


def _klein(z):
    return 2 * z / (1 + abs(z) ** 2)


def segment_mass(lam, P, Q, tol=1e-9):
    """Mass of leaves meeting the closed segment P Q (a Klein chord sign test)."""
    kp, kq = _klein(P), _klein(Q)
    A, B = np.exp(1j * lam.alpha), np.exp(1j * lam.beta)
    e = B - A
    sp = np.imag(np.conj(e) * (kp - A))
    sq = np.imag(np.conj(e) * (kq - A))
    hit = (sp * sq <= 0) | (np.abs(sp) < tol) | (np.abs(sq) < tol)
    return float(lam.w[hit].sum())


def pair_data(lam):
    leaves = [Geodesic.d(a, b) for a, b in zip(lam.alpha, lam.beta)]
    out = []
    for i in range(len(leaves)):
        for j in range(i, len(leaves)):
            if i == j:
                out.append((i, j, 0.0, float(lam.w[i]), None))
                continue
            d, P, Q = sampled_distance(leaves[i], leaves[j])
            out.append((i, j, d, segment_mass(lam, P, Q), (P, Q)))
    return leaves, out


def thurston_bruteforce(lam, slack=1e-4, data=None):
    """(lower, upper) for sup over unit arcs of the crossing mass."""
    if len(lam) == 0:
        return 0.0, 0.0
    _, data = data or pair_data(lam)
    lo = max(m for _, _, d, m, _ in data if d <= 1.0)
    hi = max(m for _, _, d, m, _ in data if d <= 1.0 + slack)
    return lo, hi


def box_sup_bruteforce(lam, slack=1e-4, data=None):
    """(lower, upper) for sup of lam(Q) over log-2 boxes, counting leaves of inflated minimal boxes."""
    if len(lam) == 0:
        return 0.0, 0.0
    leaves, data = data or pair_data(lam)
    reach = math.log(OMEGA0)
    lo = hi = 0.0
    for i, j, d, _, _ in data:
        if d > reach + slack:
            continue
        if i == j:
            m = float(lam.w[i])
        else:
            try:
                box = inflate_box(minimal_box(leaves[i], leaves[j]))
            except ValueError:
                # sampled distance just under the reach, true box slightly above log 2
                continue
            m = lam.box_mass(box)
        hi = max(hi, m)
        if d <= reach:
            lo = max(lo, m)
    return lo, hi
