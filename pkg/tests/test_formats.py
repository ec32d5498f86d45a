import json
import os
import random
from fractions import Fraction

import pytest

from adelab.formats import SchemaError, atomic_write, load_schema, poly_from_json, poly_to_json, read_poly, validate
from adelab.numkernel import DomainError

from conftest import random_poly

DET = {"m": 0, "terms": [
    {"lambda": [0, 2, 0], "u_poly": [{"exps": [0], "re": "1", "im": "0"}]},
    {"lambda": [1, 0, 1], "u_poly": [{"exps": [0], "re": "-1", "im": "0"}]},
]}


def test_schemas_ship():
    for name in ("adepoly", "eval", "expand", "decompose", "verify", "scan", "witness"):
        assert load_schema(name)["$schema"]


def test_parse_determinant():
    P = poly_from_json(DET)
    assert P.m == 0 and P.L == 2 and len(P.coeffs) == 2


@pytest.mark.parametrize("seed", range(10))
def test_round_trip(seed):
    P = random_poly(random.Random(seed), 2, 4, max_terms=6)
    doc = poly_to_json(P)
    validate(doc, "adepoly")
    assert poly_from_json(json.loads(json.dumps(doc))) == P


def test_decimal_and_fraction_strings():
    doc = {"m": 0, "terms": [{"lambda": [1, 0, 0], "u_poly": [{"exps": [0], "re": "0.1", "im": "1/3"}]}]}
    (a,) = poly_from_json(doc).coeffs.values()
    (c,) = a.terms.values()
    assert c.re == Fraction(1, 10) and c.im == Fraction(1, 3)
    assert poly_to_json(poly_from_json(doc)) == {
        "m": 0, "terms": [{"lambda": [1, 0, 0], "u_poly": [{"exps": [0], "re": "0.1", "im": "1/3"}]}]}


@pytest.mark.parametrize("bad", [
    {"m": 0},
    {"m": -1, "terms": []},
    {"m": 0, "terms": [{"lambda": [1, 0], "u_poly": []}]},
    {"m": 0, "terms": [{"lambda": [1, 0, 0], "u_poly": [{"exps": [0], "re": 0.5}]}]},
    {"m": 0, "terms": [{"lambda": [1, 0, 0], "u_poly": [{"exps": [0], "re": "abc"}]}]},
    {"m": 1, "terms": [{"lambda": [1, 0, 0], "u_poly": [{"exps": [0], "re": "1"}]}]},
])
def test_schema_violations(bad):
    with pytest.raises(SchemaError):
        poly_from_json(bad)


def test_read_poly_errors(tmp_path):
    with pytest.raises(DomainError):
        read_poly(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(SchemaError):
        read_poly(str(broken))


def test_atomic_write(tmp_path):
    target = tmp_path / "out.txt"
    target.write_text("old")
    atomic_write(str(target), "new\n")
    assert target.read_text() == "new\n"
    assert os.listdir(tmp_path) == ["out.txt"]
