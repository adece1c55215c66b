from __future__ import annotations

import json

import numpy as np
from hypothesis import given, strategies as st

from quadstab.ngon import fan_angulation
from quadstab.polyspace import Params
from quadstab.serialize import (
    angulation_from_json,
    dumps,
    matrix_from_json,
    matrix_to_json,
    normalize,
    period_vector_from_json,
    period_vector_to_json,
)


def test_normalize_rules():
    assert normalize({"b": 1 + 2j, "a": np.float64(-0.0)}) == {"b": [1.0, 2.0], "a": 0.0}
    assert normalize(np.arange(3)) == [0, 1, 2]
    assert normalize(1 / 3) == 0.333333333333
    assert dumps({"b": 1, "a": [True, None]}) == '{"a":[true,null],"b":1}'


@given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)), max_size=6))
def test_period_vector_round_trip(pairs):
    vals = [complex(a, b) for a, b in pairs]
    back = period_vector_from_json(json.loads(json.dumps(period_vector_to_json(vals))))
    assert np.allclose(back, vals, rtol=1e-11, atol=1e-300)


@given(st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_matrix_round_trip(entries):
    m = np.array(entries).reshape(2, 2)
    assert np.array_equal(matrix_from_json(json.loads(dumps(matrix_to_json(m)))), m)


def test_angulation_round_trip():
    D = fan_angulation(Params(5, 3))
    assert angulation_from_json(json.loads(dumps(D))) == D
