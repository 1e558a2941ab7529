"""Deterministic multi-start searches over the family of log-2 boxes."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .boxes import Q_STAR, family_gamma, family_gammas
from .errors import BudgetExhausted
from .hyp_core import TWO_PI, disk_from_h, mobius_from_triples, wrap


@dataclass(frozen=True)
class SearchBudget:
    """Limits for the sup searches.

    ``n_s`` shifts along each candidate centre, spread over ``[-u_span, u_span]``;
    ``n_grid`` endpoint samples per axis for generic centres; ``n_refine``
    local polishes of the best seeds; ``max_evals`` caps objective calls.
    """

    n_s: int = 25
    u_span: float = 10.0
    n_grid: int = 16
    n_refine: int = 6
    refine_iters: int = 120
    max_evals: int = 200_000
    seed: int = 0

    def to_dict(self):
        return dict(self.__dict__)


class Counter:
    def __init__(self, budget):
        self.budget = budget
        self.n = 0

    def tick(self, k=1):
        self.n += k
        if self.n > self.budget.max_evals:
            raise BudgetExhausted(f"more than {self.budget.max_evals} evaluations")


@dataclass
class Candidate:
    value: float
    params: tuple

    def key(self):
        # ties go to the lexicographically smallest parameters
        return (-self.value,) + tuple(round(p, 12) for p in self.params)


def grid_centres(n):
    """Pairs of distinct angles on an n-point grid (all unordered pairs)."""
    t = (np.arange(n) + 0.5) * TWO_PI / n
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            out.append((t[i], t[j]))
    return out


def maximise_family(score, centres, budget, counter=None, extra=(), batch=None):
    """Maximise ``score(gamma)`` over gamma = family_gamma(alpha, beta, u).

    Seeds are every centre crossed with an even sweep of u, plus ``extra``
    parameter triples.  The best seeds are polished by Nelder-Mead, which
    stays inside |u| <= u_span.  ``batch``, when given, scores a stack of
    gammas at once and replaces ``score`` for the seed sweep.  Non-finite
    scores count as -inf.  The result is deterministic for a fixed budget.
    """
    counter = counter or Counter(budget)
    us = np.linspace(-budget.u_span, budget.u_span, budget.n_s) if budget.n_s > 1 else np.zeros(1)
    cands = []
    best = None

    def offer(v, p):
        nonlocal best
        v = v if math.isfinite(v) else -math.inf
        c = Candidate(v, p)
        if best is None or v > best.value or (v == best.value and c.key() < best.key()):
            best = c
        return c

    def evaluate(p):
        a, b, u = p
        a, b = wrap(float(a)), wrap(float(b))
        if min(abs(a - b), TWO_PI - abs(a - b)) < 1e-9:
            return -math.inf
        counter.tick()
        return offer(float(score(family_gamma(a, b, u))), (a, b, float(u))).value

    def polish(p):
        if abs(p[2]) > budget.u_span:
            return math.inf
        return -evaluate(p)

    try:
        seeds = [(wrap(float(a)), wrap(float(b)), float(u)) for a, b in centres for u in us]
        if batch is not None:
            ok = [p for p in seeds if min(abs(p[0] - p[1]), TWO_PI - abs(p[0] - p[1])) >= 1e-9]
            counter.tick(len(ok))
            if ok:
                P = np.array(ok)
                vals = np.asarray(batch(family_gammas(P[:, 0], P[:, 1], P[:, 2])), dtype=float)
                cands += [offer(float(v), p) for v, p in zip(vals, ok)]
        else:
            cands += [Candidate(evaluate(p), p) for p in seeds]
        for p in extra:
            cands.append(Candidate(evaluate(p), tuple(p)))
        cands.sort(key=Candidate.key)
        for c in cands[: budget.n_refine]:
            if not math.isfinite(c.value):
                continue
            minimize(polish, np.array(c.params), method="Nelder-Mead",
                     options={"maxiter": budget.refine_iters, "xatol": 1e-7, "fatol": 1e-12,
                              "initial_simplex": _simplex(c.params)})
    except BudgetExhausted as exc:
        exc.best = best
        raise
    return best


def _simplex(p):
    a, b, u = p
    d = 0.05 * min(abs(a - b), TWO_PI - abs(a - b))
    return np.array([[a, b, u], [a + d, b, u], [a, b - d, u], [a, b, u + 0.3]])


def family_box(params):
    a, b, u = params
    return Q_STAR.image(family_gamma(a, b, u))


# ---------------------------------------------------------------------------
# unit arcs for transversal searches

def perpendicular_frame(alpha, beta):
    """Half-plane matrix sending the axis (0, inf) to (alpha, beta) and i to the foot nearest the origin."""
    m1 = alpha + ((beta - alpha) % TWO_PI) / 2.0
    return mobius_from_triples((math.pi, 1.5 * math.pi, 0.0), (alpha, m1, beta))


def perpendicular_arcs(alpha, beta, feet, r0, r1):
    """Disk endpoints of arcs orthogonal to the geodesic (alpha, beta).

    The arc meets the geodesic at signed position ``feet`` (measured from
    the point closest to the origin) and covers signed distances [r0, r1]
    along the perpendicular.  Arrays broadcast.
    """
    M = perpendicular_frame(alpha, beta)
    feet = np.asarray(feet, dtype=float)

    def point(r):
        z = np.exp(feet) * (np.tanh(r) + 1j / np.cosh(r))
        w = (M[0, 0] * z + M[0, 1]) / (M[1, 0] * z + M[1, 1])
        return disk_from_h(w)

    return point(np.asarray(r0, dtype=float)), point(np.asarray(r1, dtype=float))
