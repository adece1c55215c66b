"""Compare the compiled and pure-Python leaf tracers.

Times full trajectory classifications (which spend nearly all their time
inside ``trace_leaf``) with each backend swapped into ``quadstab.kernel``,
and checks that both backends give the same combinatorial answer.

    python3 benchmarks/bench_trace.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import time
from contextlib import contextmanager

import numpy as np

from quadstab import _kernel_py, kernel
from quadstab.foliation import classify
from quadstab.polyspace import Params, Polynomial, cstar_act

_NAMES = ("trace_leaf", "local_integral", "local_abs_integral", "fvalue")

CASES = [
    ("z^2-1, N=4", Params(4, 1), Polynomial([-1])),
    ("z^2-1, N=3", Params(3, 1), Polynomial([-1])),
    ("z^3-z rotated, N=4", Params(4, 2), cstar_act(np.exp(1j * np.pi / 40), Polynomial([-1, 0]))),
    ("quartic, N=5", Params(5, 3), Polynomial([0.3 - 1.1j, 0.7 + 0.2j, -0.4 + 0.5j])),
    ("quartic, N=6", Params(6, 3), Polynomial([-1.2 + 0.4j, 0.1 - 0.6j, 0.5 + 0.3j])),
]


@contextmanager
def backend(name: str):
    saved = {k: getattr(kernel, k) for k in _NAMES}
    if name == "python":
        for k in _NAMES:
            setattr(kernel, k, getattr(_kernel_py, k))
    try:
        yield
    finally:
        for k, v in saved.items():
            setattr(kernel, k, v)


def time_case(params: Params, p: Polynomial, repeat: int) -> tuple[float, tuple]:
    best = float("inf")
    summary = ()
    for _ in range(repeat):
        t0 = time.perf_counter()
        dec = classify(p, params)
        best = min(best, time.perf_counter() - t0)
        summary = (dec.counts(), tuple(sorted(s.diagonal for s in dec.strips)))
    return best, summary


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernel.BACKEND != "cython":
        print("compiled kernel not built; only the Python timings are meaningful")
    print(f"{'case':<22}{'compiled [s]':>14}{'python [s]':>14}{'speedup':>10}  same")
    for label, params, p in CASES:
        with backend("compiled"):
            tc, sc = time_case(params, p, args.repeat)
        with backend("python"):
            tp, sp = time_case(params, p, args.repeat)
        print(f"{label:<22}{tc:>14.4f}{tp:>14.4f}{tp / tc:>10.1f}  {sc == sp}")


if __name__ == "__main__":
    main()
