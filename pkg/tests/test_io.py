import copy
import os

import pytest
from hypothesis import given

from segalpy import io
from segalpy.errors import ParseError, ValidationError
from segalpy.simplicial import SimplicialMap, isomorphic

from conftest import FIXTURES, fixture_path
from strategies import simplicial_sets

SIMPLICIAL = sorted(f for f in os.listdir(FIXTURES) if f != "s2_pushout.json")


@pytest.mark.parametrize("name", SIMPLICIAL)
def test_fixture_round_trip(name):
    doc = io.load(fixture_path(name))
    X = io.parse_simplicial(doc)
    assert io.serialize_simplicial(X) == doc
    assert io.fingerprint(doc) == io.fingerprint(io.loads(io.dumps(doc)))


@given(simplicial_sets())
def test_generated_round_trip(X):
    doc = io.serialize_simplicial(X)
    Y = io.parse_simplicial(io.loads(io.dumps(doc)))
    assert isomorphic(X, Y)
    assert io.serialize_simplicial(Y) == doc


def test_map_round_trip():
    doc = io.load(fixture_path("s2_pushout.json"))
    A, B = io.parse_simplicial(doc["A"]), io.parse_simplicial(doc["B"])
    f = io.parse_map(doc["f"], B, A, "f")
    assert io.serialize_map(f) == doc["f"]
    assert f.violations() == []


def test_bad_face_names_the_simplex():
    doc = copy.deepcopy(io.load(fixture_path("s2.json")))
    doc["faces"]["e"][1]["target"] = "nowhere"
    with pytest.raises(ValidationError) as err:
        io.parse_simplicial(doc)
    assert "'e'" in str(err.value)


def test_identity_violation_is_reported():
    v = {"op": [0], "target": "v"}
    w = {"op": [0], "target": "w"}
    a = {"op": [0, 1], "target": "a"}
    doc = {"cap": 2, "simplices": {"0": ["v", "w"], "1": ["a"], "2": ["t"]},
           "faces": {"a": [w, v], "t": [a, a, a]}}
    with pytest.raises(ValidationError) as err:
        io.parse_simplicial(doc)
    assert err.value.violations


def test_non_surjective_op():
    doc = copy.deepcopy(io.load(fixture_path("s2.json")))
    doc["faces"]["e"][0]["op"] = [1, 1]
    with pytest.raises(ValidationError):
        io.parse_simplicial(doc)


def test_bad_json_reports_line():
    with pytest.raises(ParseError) as err:
        io.loads('{\n  "cap": 3,\n  "simplices": [\n}', "x.json")
    assert "line 4" in str(err.value)


def test_missing_file():
    with pytest.raises(ParseError):
        io.load("/nonexistent/segalpy.json")


@pytest.mark.parametrize("doc", [[], {"cap": -1, "simplices": {}},
                                 {"cap": 2, "simplices": {"x": ["v"]}},
                                 {"cap": 2, "simplices": {"0": [1]}}])
def test_malformed_documents(doc):
    with pytest.raises(ParseError):
        io.parse_simplicial(doc)


def test_duplicate_ids():
    with pytest.raises(ValidationError):
        io.parse_simplicial({"cap": 1, "simplices": {"0": ["v", "v"]}})


def test_dumps_is_canonical():
    assert io.dumps({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'
