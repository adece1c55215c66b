"""Colored quivers, forward/backward mutation, and the lattice maps F_v.

Vertices are 1-based in the public API.  ``q[c, i, j]`` (0-based array
indices) counts arrows i+1 -> j+1 of color c.  Color shifts in mutation are
taken modulo N-1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import IndexOutOfRange, InvalidQuiver
from .lattices import BilinearForm
from .polyspace import Params


@dataclass(frozen=True, eq=False)
class ColoredQuiver:
    params: Params
    q: np.ndarray

    def __post_init__(self) -> None:
        q = np.asarray(self.q, dtype=np.int64)
        expected = (self.params.N - 1, self.params.n, self.params.n)
        if q.shape != expected:
            raise InvalidQuiver(f"arrow table has shape {q.shape}, expected {expected}")
        if np.any(q < 0):
            raise InvalidQuiver("negative arrow count")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ColoredQuiver)
            and self.params == other.params
            and np.array_equal(self.q, other.q)
        )

    def __hash__(self) -> int:
        return hash((self.params, self.q.tobytes()))

    @classmethod
    def zero(cls, params: Params) -> "ColoredQuiver":
        return cls(params, np.zeros((params.N - 1, params.n, params.n), dtype=np.int64))

    @classmethod
    def from_arrows(cls, params: Params, arrows) -> "ColoredQuiver":
        """Build from (from, to, color, count) tuples with 1-based vertices."""
        q = np.zeros((params.N - 1, params.n, params.n), dtype=np.int64)
        for i, j, c, m in arrows:
            if not (1 <= i <= params.n and 1 <= j <= params.n):
                raise IndexOutOfRange(f"arrow {i}->{j} outside 1..{params.n}")
            if not 0 <= c <= params.N - 2:
                raise InvalidQuiver(f"color {c} outside 0..{params.N - 2}")
            q[c, i - 1, j - 1] += m
        return cls(params, q)

    def arrows(self) -> list[tuple[int, int, int, int]]:
        out = []
        for c, i, j in zip(*np.nonzero(self.q)):
            out.append((int(i) + 1, int(j) + 1, int(c), int(self.q[c, i, j])))
        return sorted(out)

    def to_json(self) -> dict[str, Any]:
        return {
            "N": self.params.N,
            "n": self.params.n,
            "arrows": [
                {"from": i, "to": j, "color": c, "count": m} for i, j, c, m in self.arrows()
            ],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "ColoredQuiver":
        params = Params(int(data["N"]), int(data["n"]))
        return cls.from_arrows(
            params, [(a["from"], a["to"], a["color"], a["count"]) for a in data["arrows"]]
        )


def validate(Q: ColoredQuiver) -> list[str]:
    N, n = Q.params.N, Q.params.n
    q = Q.q
    problems = []
    for i in range(n):
        if np.any(q[:, i, i] != 0):
            problems.append(f"loop at {i + 1}")
    for i in range(n):
        for j in range(n):
            if i != j and np.count_nonzero(q[:, i, j]) > 1:
                problems.append(f"arrows {i + 1}->{j + 1} carry several colors")
    for c in range(N - 1):
        bad = np.argwhere(q[c] != q[N - 2 - c].T)
        for i, j in bad:
            problems.append(f"skew-symmetry fails for {i + 1}->{j + 1} color {c}")
    return problems


def _require_valid(Q: ColoredQuiver) -> None:
    problems = validate(Q)
    if problems:
        raise InvalidQuiver("; ".join(problems))


def _vertex(v: int, n: int) -> int:
    if not 1 <= v <= n:
        raise IndexOutOfRange(f"vertex {v} outside 1..{n}")
    return v - 1


def _mutate(Q: ColoredQuiver, v: int, shift: int) -> ColoredQuiver:
    # shift = +1 for forward mutation, -1 for backward.  The two rules are
    # mirror images: reversing every arrow turns one into the other.
    _require_valid(Q)
    N, n = Q.params.N, Q.params.n
    k = _vertex(v, n)
    m = N - 1  # number of colors
    into, out_of = (N - 2, 0) if shift == 1 else (0, N - 2)
    q = Q.q
    out = np.zeros_like(q)
    total = q.sum(axis=0)
    for c in range(m):
        up = (c + shift) % m
        down = (c - shift) % m
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                if i == k:
                    out[c, i, j] = q[down, i, j]
                elif j == k:
                    out[c, i, j] = q[up, i, j]
                else:
                    val = (
                        q[c, i, j]
                        - (total[i, j] - q[c, i, j])
                        + (q[c, i, k] - q[up, i, k]) * q[into, k, j]
                        + q[out_of, i, k] * (q[c, k, j] - q[down, k, j])
                    )
                    out[c, i, j] = max(0, val)
    return ColoredQuiver(Q.params, out)


def mutate_forward(Q: ColoredQuiver, v: int) -> ColoredQuiver:
    return _mutate(Q, v, +1)


def mutate_backward(Q: ColoredQuiver, v: int) -> ColoredQuiver:
    return _mutate(Q, v, -1)


def quiver_form(Q: ColoredQuiver) -> BilinearForm:
    _require_valid(Q)
    N, n = Q.params.N, Q.params.n
    signs = np.array([(-1) ** c for c in range(N - 1)], dtype=np.int64)
    mat = (1 + (-1) ** N) * np.eye(n, dtype=np.int64) - np.tensordot(signs, Q.q, axes=1)
    return BilinearForm(mat, 1 if N % 2 == 0 else -1)


def fv_map(Q: ColoredQuiver, v: int) -> np.ndarray:
    """F_v: alpha'_v -> -alpha_v, alpha'_j -> alpha_j + q^(0)_{vj} alpha_v (columns)."""
    _require_valid(Q)
    n = Q.params.n
    k = _vertex(v, n)
    f = np.eye(n, dtype=np.int64)
    f[k, :] += Q.q[0, k, :]
    f[k, k] = -1
    return f


def fv_map_backward(Q: ColoredQuiver, v: int) -> np.ndarray:
    """Change of basis for a backward step out of the chamber of ``Q``.

    It is F_v of the backward-mutated quiver; F_v matrices are involutions,
    so this also inverts the forward step that leads back to ``Q``.
    """
    return fv_map(mutate_backward(Q, v), v)
