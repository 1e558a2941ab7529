"""Command-line entry point: ``python -m earthquake_lab`` or ``earthquake-lab``."""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import fields

from .errors import BudgetExhausted, ConfigError, EarthquakeLabError, InputParseError
from .search import SearchBudget
from .serialize import SCHEMA, dumps, lamination_to_json, load_lamination

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def thread_cap():
    """Value of EARTHQUAKE_LAB_THREADS (estimators run single-threaded, so any cap holds)."""
    raw = os.environ.get("EARTHQUAKE_LAB_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"EARTHQUAKE_LAB_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("EARTHQUAKE_LAB_THREADS must be positive")
    return n


def _parse_nus(text):
    try:
        nus = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"bad exponent list {text!r}") from None
    if not nus or any(not (0 < v <= 1) for v in nus):
        raise ConfigError("exponents must lie in (0, 1]")
    return nus


def _budget(d):
    known = {f.name for f in fields(SearchBudget)}
    bad = set(d) - known
    if bad:
        raise ConfigError(f"unknown budget keys {sorted(bad)}")
    return SearchBudget(**d)


def build_config(args):
    from .experiments import ExperimentConfig

    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    experiment = args.experiment or data.get("experiment")
    if not experiment:
        raise ConfigError("no experiment given")
    budget = _budget(data.get("budget", {}))
    if args.budget is not None:
        budget = SearchBudget(**{**budget.to_dict(), "max_evals": args.budget})
    nus = _parse_nus(args.nu) if args.nu else tuple(data.get("nus", (0.1, 0.25, 0.5, 1.0)))
    seed = args.seed if args.seed is not None else int(data.get("seed", 0))
    kw = {"experiment": experiment, "seed": seed, "nus": nus, "budget": budget,
          "params": dict(data.get("params", {}))}
    if "t_grid" in data:
        kw["t_grid"] = tuple(float(t) for t in data["t_grid"])
    return ExperimentConfig(**kw)


def to_csv(result):
    rows = result.get("results", {}).get("rows", [])
    buf = io.StringIO()
    if rows:
        cols = [k for k, v in rows[0].items() if isinstance(v, (int, float, str, bool)) or v is None]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([r.get(c) for c in cols])
    return buf.getvalue()


def _emit(text, out, name):
    if out is None:
        sys.stdout.write(text)
        return
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, name), "w") as fh:
        fh.write(text)


def cmd_run(args):
    from .experiments import run

    config = build_config(args)
    try:
        result = run(config)
    except BudgetExhausted as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return EXIT_BUDGET
    if args.format == "csv":
        _emit(to_csv(result), args.out, f"{config.experiment}.csv")
    else:
        _emit(dumps(result), args.out, f"{config.experiment}.json")
    if result["pass"]:
        return EXIT_PASS
    return EXIT_BUDGET if result.get("budget_exhausted") else EXIT_FAIL


def cmd_list(args):
    from .experiments import EXPERIMENTS

    sys.stdout.write("\n".join(sorted(EXPERIMENTS)) + "\n")
    return EXIT_PASS


def cmd_norms(args):
    from .laminations import box_sup, thurston_norm

    lam = load_lamination(args.input)
    budget = SearchBudget() if args.budget is None else SearchBudget(max_evals=args.budget)
    th = thurston_norm(lam, budget)
    bs = box_sup(lam, budget)
    out = {"schema": SCHEMA, "thurston": {"lower": th.lower, "upper": th.upper, "exact": th.exact,
                                          "C0": th.C0, "notes": th.notes},
           "box_sup": {"value": bs.value, "exact": bs.exact, "box": bs.box},
           "total_mass": lam.total_mass()}
    _emit(dumps(out), args.out, "norms.json")
    return EXIT_PASS


def cmd_earthquake(args):
    import numpy as np

    from .earthquake import build_earthquake
    from .laminations import DiscreteLamination

    lam = load_lamination(args.input)
    if not isinstance(lam, DiscreteLamination):
        raise InputParseError("earthquakes need a discrete lamination")
    E = build_earthquake(lam, complex(args.base_x, args.base_y))
    thetas = np.linspace(0.0, 2 * np.pi, args.points, endpoint=False)
    out = {"schema": SCHEMA, "lamination": lamination_to_json(lam), "base_point": [args.base_x, args.base_y],
           "table": E.as_table().to_dict(),
           "samples": [[float(t), float(v)] for t, v in zip(thetas, E.eval_angles(thetas))]}
    _emit(dumps(out), args.out, "earthquake.json")
    return EXIT_PASS


def cmd_discretize(args):
    from .approx import discretize

    lam = load_lamination(args.input)
    rep = discretize(lam, args.n)
    _emit(dumps({"schema": SCHEMA, "report": rep.to_dict(), "lamination": lamination_to_json(rep.lam_n)}),
          args.out, f"discretize-{args.n}.json")
    return EXIT_PASS


def cmd_plot(args):
    from .boxes import Q_STAR
    from .earthquake import CircleMap, build_earthquake
    from .laminations import DiscreteLamination
    from .norms import CircleVectorField
    from .plot import Figure

    lam = load_lamination(args.input)
    fig = Figure(args.title).lamination(lam)
    if args.kind == "earthquake":
        if not isinstance(lam, DiscreteLamination):
            raise ConfigError("earthquake pictures need a discrete lamination")
        fig.boundary_map(CircleMap.from_earthquake(build_earthquake(lam)))
    elif args.kind == "field":
        if not isinstance(lam, DiscreteLamination):
            raise ConfigError("field pictures need a discrete lamination")
        fig.field(CircleVectorField.from_lamination(lam))
    if args.reference_box:
        fig.box(Q_STAR)
    _emit(fig.svg(), args.out, "plot.svg")
    return EXIT_PASS


def parser():
    p = argparse.ArgumentParser(prog="earthquake-lab", description="Earthquakes and measured laminations.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a built-in experiment")
    r.add_argument("experiment", nargs="?")
    r.add_argument("--config")
    r.add_argument("--out")
    r.add_argument("--seed", type=int)
    r.add_argument("--nu")
    r.add_argument("--budget", type=int)
    r.add_argument("--format", choices=("json", "csv"), default="json")
    r.set_defaults(func=cmd_run)

    sub.add_parser("list", help="list experiments").set_defaults(func=cmd_list)

    n = sub.add_parser("norms", help="Thurston norm interval and box sup of a lamination file")
    n.add_argument("input")
    n.add_argument("--out")
    n.add_argument("--budget", type=int)
    n.set_defaults(func=cmd_norms)

    e = sub.add_parser("earthquake", help="boundary table of a finite earthquake")
    e.add_argument("input")
    e.add_argument("--out")
    e.add_argument("--points", type=int, default=16)
    e.add_argument("--base-x", type=float, default=0.0)
    e.add_argument("--base-y", type=float, default=0.0)
    e.set_defaults(func=cmd_earthquake)

    d = sub.add_parser("discretize", help="discretize a lamination file")
    d.add_argument("input")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--out")
    d.set_defaults(func=cmd_discretize)

    g = sub.add_parser("plot", help="SVG picture of a lamination file")
    g.add_argument("input")
    g.add_argument("--kind", choices=("lamination", "earthquake", "field"), default="lamination")
    g.add_argument("--reference-box", action="store_true")
    g.add_argument("--title")
    g.add_argument("--out")
    g.set_defaults(func=cmd_plot)
    return p


def main(argv=None):
    args = parser().parse_args(argv)
    try:
        thread_cap()
        return args.func(args)
    except (ConfigError, InputParseError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except EarthquakeLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
