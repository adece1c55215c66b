"""Selects the leaf-tracing kernel: compiled if available, else pure Python.

Set QUADSTAB_PURE_PYTHON=1 to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernel_py

ESCAPED = _kernel_py.ESCAPED
HIT = _kernel_py.HIT
BUDGET = _kernel_py.BUDGET
BRANCH = _kernel_py.BRANCH

_impl = _kernel_py
BACKEND = "python"

if os.environ.get("QUADSTAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _trace as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

trace_leaf = _impl.trace_leaf
local_integral = _impl.local_integral
local_abs_integral = _impl.local_abs_integral
fvalue = _impl.fvalue
