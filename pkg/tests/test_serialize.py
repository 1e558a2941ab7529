import json
import math

import numpy as np
import pytest
from hypothesis import given, settings

from earthquake_lab.boxes import GeodesicBox
from earthquake_lab.corpus import band_fixture, band_with_atoms, example1
from earthquake_lab.errors import InputParseError
from earthquake_lab.hyp_core import hp
from earthquake_lab.laminations import EMPTY, DiscreteLamination
from earthquake_lab.serialize import (
    SCHEMA,
    box_from_json,
    box_to_json,
    clean,
    dump_lamination,
    dumps,
    lamination_from_json,
    lamination_to_json,
    load_lamination,
    point_from_json,
    point_to_json,
)

from strategies import laminations


@settings(max_examples=30)
@given(laminations())
def test_discrete_round_trip(lam):
    back = lamination_from_json(json.loads(dumps(lamination_to_json(lam))))
    assert np.allclose(back.alpha, lam.alpha, atol=1e-12) and np.allclose(back.beta, lam.beta, atol=1e-12)
    assert np.array_equal(back.w, lam.w)


def test_band_and_sum_round_trip(tmp_path):
    for lam in (band_fixture(), band_with_atoms()):
        path = tmp_path / "lam.json"
        dump_lamination(lam, path)
        back = load_lamination(path)
        assert back.total_mass() == pytest.approx(lam.total_mass(), rel=1e-12)
        Q = GeodesicBox.d_(0.4, 0.7, 2.7, 2.88)
        assert back.box_mass(Q) == pytest.approx(lam.box_mass(Q), abs=1e-12)


def test_empty_round_trip():
    back = lamination_from_json(lamination_to_json(EMPTY))
    assert len(back) == 0


def test_infinite_point():
    p = point_from_json(point_to_json(hp(math.inf)))
    assert p.is_inf and p.chart == "H"


def test_box_round_trip():
    Q = GeodesicBox.d_(0.1, 0.5, 2.0, 3.0, {"open_a"})
    R = box_from_json(box_to_json(Q))
    assert R.corners == pytest.approx(Q.corners) and R.flags == Q.flags


def test_dumps_is_canonical():
    obj = {"b": np.float64(1.5), "a": [np.int64(2), math.inf, math.nan], "c": np.array([1.0, 2.0])}
    text = dumps(obj)
    assert text == dumps(dict(reversed(list(obj.items()))))
    assert json.loads(text) == {"a": [2, "inf", "nan"], "b": 1.5, "c": [1.0, 2.0]}
    assert clean(np.longdouble(0.25)) == 0.25


def test_lamination_schema_tag():
    assert lamination_to_json(example1(3))["schema"] == SCHEMA


@pytest.mark.parametrize("bad", [{"type": "nope"}, {"type": "discrete", "leaves": [{"g": 3}]}, {"schema": "eql-0", "type": "discrete"}, [1, 2], "x"])
def test_bad_input(bad):
    with pytest.raises(InputParseError):
        lamination_from_json(bad)


def test_bad_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(InputParseError):
        load_lamination(path)


def test_crossing_file_is_a_parse_error(tmp_path):
    lam = DiscreteLamination([0.0, 0.5], [3.0, 2.0], [1.0, 1.0])
    d = lamination_to_json(lam)
    d["leaves"][1]["g"]["q"]["v"] = 4.0
    d["leaves"][1]["g"]["q"]["chart"] = "D"
    d["leaves"][1]["g"]["p"] = {"chart": "D", "v": 1.0}
    with pytest.raises(InputParseError):
        lamination_from_json(d)
