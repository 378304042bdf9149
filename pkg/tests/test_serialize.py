from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest

from conftest import Q
from yrk import serialize as ser
from yrk.drinfeld import drinfeld_tensor
from yrk.errors import SchemaError
from yrk.repn import evaluation_rep_sl2, vector_rep_sl3
from yrk.rminus import rminus_recursive
from yrk.scalars import EXACT, FLOAT


def test_scalar_roundtrip():
    for z in (Q(Fraction(-7, 3), Fraction(1, 2)), Q(0)):
        assert ser.decode_scalar(ser.encode_scalar(z)) == z
    assert ser.decode_scalar(ser.encode_scalar(0.25 - 1.5j)) == 0.25 - 1.5j
    assert ser.encode_scalar(Fraction(3, 4)) == ["3/4", "0"]
    assert ser.decode_scalar("2/3+i", EXACT) == Q(Fraction(2, 3), 1)


def test_scalar_schema_errors():
    with pytest.raises(SchemaError):
        ser.decode_scalar([1, 2, 3])
    with pytest.raises(SchemaError):
        ser.decode_scalar(["1", 2.0])
    with pytest.raises(SchemaError):
        ser.decode_scalar([0.5, 0.0], EXACT)
    with pytest.raises(SchemaError):
        ser.decode_scalar({"re": 1})


def test_ratmat_roundtrip(c2_0):
    R = rminus_recursive(c2_0, drinfeld_tensor(evaluation_rep_sl2(1), evaluation_rep_sl2(-1), 0))
    doc = json.loads(json.dumps(ser.encode_ratmat(R)))
    assert ser.decode_ratmat(doc) == R
    with pytest.raises(SchemaError):
        ser.decode_ratmat({"kind": "matrix"})


@pytest.mark.parametrize("V", [evaluation_rep_sl2(Q(Fraction(2, 5), -1), 1), vector_rep_sl3(Q(1)),
                               evaluation_rep_sl2(0.5 + 0.25j, 1.0)])
def test_rep_roundtrip(V, tmp_path):
    path = tmp_path / "rep.json"
    ser.dump(ser.encode_rep(V), path)
    W = ser.decode_rep(ser.load(path))
    assert W.backend == V.backend and W.equals(V)
    assert W.pole_set() == V.pole_set()


def test_rep_backend_override(c2_1):
    W = ser.decode_rep(ser.encode_rep(c2_1), FLOAT)
    assert W.backend == FLOAT
    assert np.allclose(W.t1[0], np.array(c2_1.t1[0], dtype=complex))


def test_rep_schema_errors(c2_0, tmp_path):
    doc = ser.encode_rep(c2_0)
    broken = dict(doc)
    del broken["t1"]
    with pytest.raises(SchemaError):
        ser.decode_rep(broken)
    broken = dict(doc, dim=3)
    with pytest.raises(SchemaError):
        ser.decode_rep(broken)
    with pytest.raises(SchemaError):
        ser.decode_rep([1, 2])
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(SchemaError):
        ser.load(bad)
