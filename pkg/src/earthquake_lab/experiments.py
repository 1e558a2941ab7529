"""Built-in experiments.  Each returns a JSON-ready dict with a pass/fail verdict."""

import math
from dataclasses import dataclass, field

import numpy as np

from .approx import discretize, is_leaf, overlap_census
from .boxes import CENTER_STAR, LOG2, Q_STAR, family_gamma, liouville_corners
from .bruteforce import box_sup_bruteforce, pair_data, thurston_bruteforce
from .corpus import (
    ELL_INF,
    band_fixture,
    discrete_corpus,
    ell,
    example1,
    example1_limit,
    example1_midpoint,
    random_lamination,
    random_windowed,
)
from .earthquake import build_earthquake
from .errors import ConfigError
from .hyp_core import Geodesic, cayley, disk_from_h, metric_geodesics
from .infinitesimal import decay_constants, fd_check, tail_report
from .laminations import box_sup, comparison_constants, thurston_norm
from .norms import (
    BUMP,
    covering_gammas,
    frechet_norm_grid,
    gaussian_profile,
    box_frechet_constant,
    uweak_distance,
    weak_pairing,
)
from .boxes import gamma_Q
from .search import SearchBudget
from .serialize import SCHEMA

NU_GRID = (0.1, 0.25, 0.5, 1.0)


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 0
    nus: tuple = NU_GRID
    budget: SearchBudget = field(default_factory=SearchBudget)
    t_grid: tuple = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
    params: dict = field(default_factory=dict)

    def to_dict(self):
        return {"experiment": self.experiment, "seed": self.seed, "nus": list(self.nus),
                "budget": self.budget.to_dict(), "t_grid": list(self.t_grid), "params": self.params}


def _relation(name, holds, **detail):
    return {"name": name, "holds": bool(holds), **detail}


def _result(config, results, relations, exhausted=False):
    return {"schema": SCHEMA, "config": config.to_dict(), "results": results, "relations": relations,
            "pass": all(r["holds"] for r in relations), "budget_exhausted": bool(exhausted)}


# ---------------------------------------------------------------------------
# non-convergence of the leaf sequence (1/n, inf) -> (0, inf)

WEAK_PROFILES = (
    gaussian_profile(ELL_INF, 1.0),
    gaussian_profile(Geodesic.h(-1.0, math.inf), 1.0),
    gaussian_profile(Geodesic.h(1.0, math.inf), 0.5),
)

# phi_0 is identically 1 on Q*_0, which contains the centre of Q*
FRECHET_FLOOR = 2.0 / math.pi * float(BUMP(CENTER_STAR.alpha, CENTER_STAR.beta))


def _sequence_experiment(config, make):
    ns = [int(n) for n in config.params.get("ns", (2, 8, 32, 128))]
    limit = example1_limit()
    rows, exhausted = [], False
    for n in ns:
        lam_n = make(n)
        fr = frechet_norm_grid(lam_n, limit, config.nus, config.budget)
        exhausted |= any(p.exhausted for p in fr[0].pairings.values())
        weak = [weak_pairing(lam_n, limit, f) for f in WEAK_PROFILES]
        ends = max(metric_geodesics(g, ELL_INF) for g, _ in lam_n.leaves)
        rows.append({"n": n, "frechet": [r.to_dict() for r in fr], "weak_pairings": weak,
                     "uweak_bump": fr[0].pairings["bump"].value, "endpoint_distance": ends})
    rel = []
    lows = [r["lower"] for row in rows for r in row["frechet"]]
    rel.append(_relation("frechet lower >= (2/pi) phi_0(centre of Q*) for every n and nu",
                         min(lows) >= FRECHET_FLOOR, floor=FRECHET_FLOOR, min_lower=min(lows)))
    rel.append(_relation("frechet lower <= upper", all(
        r["lower"] <= r["upper"] + 1e-12 for row in rows for r in row["frechet"])))
    for k in range(len(WEAK_PROFILES)):
        seq = [row["weak_pairings"][k] for row in rows]
        rel.append(_relation(f"weak pairing {k} decreases", all(b < a for a, b in zip(seq, seq[1:])), values=seq))
    if 128 in ns:
        last = rows[ns.index(128)]["weak_pairings"]
        rel.append(_relation("weak pairings < 1e-2 at n = 128", max(last) < 1e-2, values=last))
    ends = [row["endpoint_distance"] for row in rows]
    rel.append(_relation("leaf endpoints approach those of the limit", all(b < a for a, b in zip(ends, ends[1:]))))
    return _result(config, {"rows": rows, "weak_profiles": [f.name for f in WEAK_PROFILES]}, rel, exhausted)


def example1_frechet(config):
    return _sequence_experiment(config, example1)


def example1_midpoint_exp(config):
    return _sequence_experiment(config, example1_midpoint)


# ---------------------------------------------------------------------------
# elementary earthquakes along (1/n, inf)

ELEMENTARY_BASE = complex(disk_from_h(-1.0 + 1.0j))


def elementary_distortion(n):
    """L((h_n o h_inf^-1)(Q_n)) for Q_n = [inf, -e/n] x [0, e/n]."""
    h_inf = build_earthquake(example1_limit(), ELEMENTARY_BASE).as_table().inverse()
    h_n = build_earthquake(example1(n), ELEMENTARY_BASE).as_table()
    corners = np.array([cayley(x) for x in (math.inf, -math.e / n, 0.0, math.e / n)])
    return float(liouville_corners(*h_n(h_inf(corners))))


def elementary_teichmuller(config):
    ns = [int(n) for n in config.params.get("ns", (1, 10, 100, 1000))]
    expected = math.log(math.e + 1.0) - 1.0
    rows = []
    for n in ns:
        L = elementary_distortion(n)
        rows.append({"n": n, "L": L, "distortion": abs(L - LOG2), "error": abs(L - expected)})
    rel = [_relation("L(h(Q_n)) = log(e+1) - 1 for every n", all(r["error"] <= 1e-9 for r in rows),
                     expected=expected, expected_distortion=abs(expected - LOG2))]
    return _result(config, {"rows": rows}, rel)


# ---------------------------------------------------------------------------
# discretization of the band fixture

def census_boxes(band, k_t=40, k_u=25):
    """k_t * k_u log-2 boxes centred on band leaves and slid along them."""
    out = []
    for t in np.linspace(0.0, 1.0, k_t):
        g = band.leaf(t)
        for u in np.linspace(-3.0, 3.0, k_u):
            out.append(Q_STAR.image(family_gamma(g.alpha, g.beta, u)))
    return out


def discretize_band(config):
    ns = [int(n) for n in config.params.get("ns", (4, 16, 64, 256))]
    band = band_fixture()
    sweep = census_boxes(band)
    total = band.total_mass()
    rows, exhausted = [], False
    for n in ns:
        rep = discretize(band, n, budget=config.budget)
        masses = [r.mass for r in rep.ledger]
        peaks = [r.peak_box for r in rep.ledger if r.peak_box is not None]
        census = max(overlap_census(peaks, Q) for Q in sweep)
        conserved = max(abs(rep.lam_n.box_mass(r.box) - r.mass) for r in rep.ledger)
        provenance = all(is_leaf(band, r.leaf) for r in rep.ledger)
        uw = uweak_distance(rep.lam_n, band, BUMP, config.budget)
        exhausted |= uw.exhausted
        rows.append({"n": n, "leaves": len(rep.lam_n), "max_box_mass": max(masses), "atom_tail": rep.atom_tail,
                     "mass_defect": abs(rep.lam_n.total_mass() - (total - rep.atom_tail)),
                     "box_conservation_error": conserved, "leaf_provenance": provenance,
                     "box_sup_n": rep.box_sup_n, "box_sup_input": rep.box_sup_input,
                     "box_sup_bound": rep.box_sup_bound, "max_census": census, "uweak": uw.value,
                     "uweak_witness": uw.to_dict(), "thurston_n": rep.thurston["lambda_n"]})
    rel = [
        _relation("per-box mass < 1/n", all(r["max_box_mass"] < 1.0 / r["n"] for r in rows)),
        _relation("atom tail < 1/n", all(r["atom_tail"] < 1.0 / r["n"] for r in rows)),
        _relation("ledger masses reproduce box masses", all(r["box_conservation_error"] == 0.0 for r in rows)),
        _relation("total mass conserved", all(r["mass_defect"] <= 1e-12 for r in rows)),
        _relation("placed leaves are leaves of the band", all(r["leaf_provenance"] for r in rows)),
        _relation("box_sup(lambda_n) <= 2 box_sup(lambda) + 2",
                  all(r["box_sup_n"] <= r["box_sup_bound"] for r in rows)),
        _relation("overlap census <= 2", all(r["max_census"] <= 2 for r in rows), sweep=len(sweep)),
    ]
    uw = [r["uweak"] for r in rows]
    rel.append(_relation("uweak distance strictly decreasing", all(b < a for a, b in zip(uw, uw[1:])), values=uw))
    if 256 in ns:
        rel.append(_relation("uweak at n = 256 < 0.05 * first value", uw[ns.index(256)] < 0.05 * uw[0]))
    return _result(config, {"rows": rows, "sweep_boxes": len(sweep)}, rel, exhausted)


# ---------------------------------------------------------------------------
# infinitesimal earthquakes

def infinitesimal_fd(config):
    rng = np.random.default_rng(config.seed)
    count = int(config.params.get("laminations", 50))
    points = int(config.params.get("points", 20))
    rows = []
    for k in range(count):
        lam = random_lamination(rng, int(rng.integers(1, 11)))
        thetas = rng.uniform(0.0, 2 * math.pi, points)
        for th in thetas:
            r = fd_check(lam, float(th), 0j, config.t_grid)
            last = r["rows"][-1]["discrepancy"]
            rows.append({"lamination": k, "theta": float(th), "dot_E": r["dot_E"], "slope": r["slope"],
                         "final_discrepancy": last})
    slopes = [r["slope"] for r in rows if r["slope"] is not None]
    bad_slope = [r for r in rows if r["slope"] is not None and abs(r["slope"] - 1.0) > 0.2]
    bad_abs = [r for r in rows if r["final_discrepancy"] >= 1e-3]
    rel = [_relation("log-log slope within 1 +- 0.2", not bad_slope, violations=len(bad_slope),
                     min_slope=min(slopes) if slopes else None, max_slope=max(slopes) if slopes else None),
           _relation("discrepancy < 1e-3 at the smallest t", not bad_abs, violations=len(bad_abs))]
    return _result(config, {"rows": rows}, rel)


def decay_profile(config):
    rng = np.random.default_rng(config.seed)
    cases = [("band", band_fixture())]
    cases += [(f"windowed-{k}", random_windowed(rng, int(rng.integers(2, 13)))) for k in range(5)]
    thetas = np.linspace(0.0, 2 * math.pi, int(config.params.get("points", 12)), endpoint=False) + 0.05
    depths = range(int(config.params.get("max_depth", 10)) + 1)
    rows, violations = [], 0
    for name, lam in cases:
        th = thurston_norm(lam, config.budget).lower
        for z in thetas:
            for d in depths:
                r = tail_report(lam, float(z), 0j, d, th)
                violations += not r.ok
                rows.append({"case": name, "theta": float(z), "d": d, "measured_tail": r.measured_tail,
                             "bound": r.analytic_bound})
    rel = [_relation("measured tail <= C2 ||lambda||_Th exp(-d)", violations == 0, violations=violations)]
    return _result(config, {"rows": rows, "constants": decay_constants(0j)}, rel)


# ---------------------------------------------------------------------------
# norm sandwiches

def norm_sandwiches(config):
    corpus = discrete_corpus(config.seed, int(config.params.get("count", 24)))
    consts = comparison_constants()
    C0, K = consts["C0"], consts["K"]
    rows, viol = [], {"thurston_oracle": 0, "box_oracle": 0, "thurston_box": 0, "box_frechet": 0}
    c1 = {nu: box_frechet_constant(nu) for nu in config.nus}
    exhausted = False
    for name, lam in corpus:
        data = pair_data(lam)
        tb = thurston_bruteforce(lam, data=data)
        bb = box_sup_bruteforce(lam, data=data)
        th = thurston_norm(lam)
        bs = box_sup(lam)
        ok_t = tb[0] - 1e-12 <= th.lower <= tb[1] + 1e-12
        ok_b = bb[0] - 1e-12 <= bs.value <= bb[1] + 1e-12
        ok_tb = th.lower <= C0 * bs.value + 1e-12 and bs.value <= th.upper + 1e-12 and \
            bs.value <= K * th.lower + 1e-12 and \
            tb[0] <= C0 * bb[1] + 1e-12 and bb[0] <= K * tb[1] + 1e-12
        extra = covering_gammas(gamma_Q(bs.box)) if bs.box is not None else []
        fr = frechet_norm_grid(lam, None, config.nus, config.budget, profiles=("bump",), extra_gammas=extra)
        exhausted |= any(p.exhausted for p in fr[0].pairings.values())
        ok_bf = all(r.lower <= bs.value + 1e-12 and bs.value <= c1[r.nu] * r.lower + 1e-12 for r in fr)
        viol["thurston_oracle"] += not ok_t
        viol["box_oracle"] += not ok_b
        viol["thurston_box"] += not ok_tb
        viol["box_frechet"] += not ok_bf
        rows.append({"name": name, "leaves": len(lam), "thurston": th.lower, "thurston_bruteforce": list(tb),
                     "box_sup": bs.value, "box_sup_bruteforce": list(bb),
                     "frechet_lower": {str(r.nu): r.lower for r in fr}})
    rel = [_relation(f"{k} containment", v == 0, violations=v) for k, v in viol.items()]
    meta = {"C0": C0, "K": K, "C1": {str(k): v for k, v in c1.items()}}
    return _result(config, {"rows": rows, "constants": meta}, rel, exhausted)


EXPERIMENTS = {
    "example1-frechet": example1_frechet,
    "example1-midpoint": example1_midpoint_exp,
    "elementary-teichmuller": elementary_teichmuller,
    "discretize-band": discretize_band,
    "infinitesimal-fd": infinitesimal_fd,
    "decay-profile": decay_profile,
    "norm-sandwiches": norm_sandwiches,
}


def run(config):
    try:
        fn = EXPERIMENTS[config.experiment]
    except KeyError:
        raise ConfigError(f"unknown experiment {config.experiment!r}; choose from {sorted(EXPERIMENTS)}") from None
    return fn(config)


__all__ = ["EXPERIMENTS", "ExperimentConfig", "run", "elementary_distortion", "ell"]
