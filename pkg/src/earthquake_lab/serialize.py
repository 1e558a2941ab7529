"""JSON encodings of points, geodesics, maps, boxes and laminations."""

import json
import math

import numpy as np

from .boxes import GeodesicBox
from .errors import ConfigError, InputParseError
from .hyp_core import BoundaryPoint, Geodesic, dp, hp
from .laminations import EMPTY, BandLamination, DiscreteLamination, SumLamination

SCHEMA = "eql-1"


def point_to_json(p):
    return {"chart": p.chart, "v": "inf" if p.is_inf else float(p.v)}


def point_from_json(d):
    try:
        if isinstance(d, (int, float, str)):
            v = math.inf if d == "inf" else float(d)
            return hp(v)
        v = d["v"]
        v = math.inf if v in ("inf", "Infinity") else float(v)
        return BoundaryPoint(d.get("chart", "H"), v)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputParseError(f"bad boundary point {d!r}: {exc}") from exc


def geodesic_to_json(g):
    p, q = g.endpoints()
    return {"p": point_to_json(p), "q": point_to_json(q)}


def geodesic_from_json(d):
    try:
        if isinstance(d, (list, tuple)):
            p, q = d
        else:
            p, q = d["p"], d["q"]
        return Geodesic(point_from_json(p), point_from_json(q))
    except InputParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputParseError(f"bad geodesic {d!r}: {exc}") from exc


def mobius_to_json(M):
    return [float(v) for v in np.asarray(M, dtype=float).ravel()]


def mobius_from_json(d):
    try:
        M = np.array(d, dtype=float).reshape(2, 2)
    except (TypeError, ValueError) as exc:
        raise InputParseError(f"bad matrix {d!r}") from exc
    return M


def box_to_json(Q):
    return {"a": float(Q.a), "b": float(Q.b), "c": float(Q.c), "d": float(Q.d), "flags": sorted(Q.flags)}


def box_from_json(d):
    try:
        pts = [d[k] for k in "abcd"]
        if all(isinstance(p, (int, float)) for p in pts):
            pts = [dp(p) for p in pts]
        else:
            pts = [point_from_json(p) for p in pts]
        return GeodesicBox(*pts, flags=d.get("flags", ()))
    except (KeyError, TypeError) as exc:
        raise InputParseError(f"bad box {d!r}") from exc


def lamination_to_json(lam):
    return {"schema": SCHEMA, **_lamination_body(lam)}


def _lamination_body(lam):
    if isinstance(lam, BandLamination):
        if lam.spec is None:
            raise ConfigError("only bands built from function specs can be written")
        return {"type": "band", **lam.spec}
    if isinstance(lam, SumLamination):
        return {"type": "sum", "parts": [_lamination_body(p) for p in lam.parts]}
    if isinstance(lam, DiscreteLamination):
        return {"type": "discrete",
                "leaves": [{"g": geodesic_to_json(g), "w": w} for g, w in lam.leaves]}
    raise ConfigError(f"cannot serialize {type(lam).__name__}")


def lamination_from_json(d):
    if not isinstance(d, dict) or "type" not in d:
        raise InputParseError("lamination must be an object with a 'type'")
    if d.get("schema", SCHEMA) != SCHEMA:
        raise InputParseError(f"unsupported schema {d['schema']!r}; expected {SCHEMA!r}")
    kind = d["type"]
    try:
        if kind == "discrete":
            leaves = [(geodesic_from_json(x["g"]), float(x["w"])) for x in d.get("leaves", [])]
            if not leaves:
                return DiscreteLamination([], [], [])
            return DiscreteLamination.from_leaves(leaves)
        if kind == "band":
            return BandLamination.from_specs(d["alpha"], d["beta"], d["rho"])
        if kind == "sum":
            return SumLamination([lamination_from_json(p) for p in d["parts"]])
    except InputParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputParseError(f"bad {kind} lamination: {exc}") from exc
    raise InputParseError(f"unknown lamination type {kind!r}")


def load_lamination(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputParseError(f"cannot read {path}: {exc}") from exc
    return lamination_from_json(data)


def dump_lamination(lam, path):
    with open(path, "w") as fh:
        fh.write(dumps(lamination_to_json(lam)))


def earthquake_to_json(E):
    return {"lamination": lamination_to_json(E.lamination), "base_point": [E.base_point.real, E.base_point.imag],
            "table": E.as_table().to_dict()}


def clean(obj):
    """Plain JSON values: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Geodesic):
        return geodesic_to_json(obj)
    if isinstance(obj, GeodesicBox):
        return box_to_json(obj)
    if obj is EMPTY:
        return lamination_to_json(DiscreteLamination([], [], []))
    return obj


def dumps(obj):
    return json.dumps(clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"
