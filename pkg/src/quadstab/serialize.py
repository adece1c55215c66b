"""Canonical JSON: sorted keys, floats at 12 significant digits, complex as [re, im]."""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .ngon import NAngulation


def _float(x: float) -> float:
    y = float(f"{x:.12g}")
    return 0.0 if y == 0 else y


def normalize(obj: Any) -> Any:
    """Plain JSON data for obj: arrays become lists and numbers are rounded."""
    if hasattr(obj, "to_json"):
        return normalize(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_float(obj.real), _float(obj.imag)]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(normalize(obj), sort_keys=True, separators=(",", ":"))


def complex_list(data) -> list[complex]:
    return [complex(re, im) for re, im in data]


def period_vector_to_json(values) -> list[list[float]]:
    return normalize([complex(z) for z in values])


def period_vector_from_json(data) -> np.ndarray:
    return np.array(complex_list(data), dtype=complex)


def matrix_to_json(m) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(m)]


def matrix_from_json(data) -> np.ndarray:
    return np.array(data, dtype=np.int64)


def angulation_from_json(data) -> NAngulation:
    return NAngulation.from_json(data)
