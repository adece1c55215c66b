"""Monic centered polynomials, their roots, and the C*-action.

A point of the configuration space is the polynomial

    p(z) = z^{n+1} + u_1 z^{n-1} + ... + u_n

with simple roots.  The coefficient list ``(u_1, ..., u_n)`` is the only
stored data; the degree and the derived polygon size are recomputed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInput, InputError, NonConvergence, NotCentered


@dataclass(frozen=True)
class Params:
    N: int
    n: int

    def __post_init__(self) -> None:
        if int(self.N) != self.N or self.N < 3:
            raise InputError(f"N must be an integer >= 3, got {self.N}")
        if int(self.n) != self.n or self.n < 1:
            raise InputError(f"n must be an integer >= 1, got {self.n}")

    @property
    def d(self) -> int:
        return (self.N - 2) * (self.n + 1) + 2

    @property
    def even(self) -> bool:
        return self.N % 2 == 0


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable[complex]):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in coeffs))
        if not self.coeffs:
            raise InputError("a polynomial needs at least one coefficient")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        return self.n + 1

    def full(self) -> np.ndarray:
        """Coefficients of z^{n+1}, z^n, ..., z^0 (highest first)."""
        return np.array([1.0, 0.0, *self.coeffs], dtype=complex)

    def scale(self) -> float:
        return max(1.0, max(abs(c) for c in self.coeffs))

    def __call__(self, z):
        return np.polyval(self.full(), z)

    def derivative(self) -> np.ndarray:
        return np.polyder(self.full())

    def to_json(self) -> list[list[float]]:
        return [[c.real, c.imag] for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[float]]) -> "Polynomial":
        return cls(complex(re, im) for re, im in data)


@dataclass(frozen=True)
class RootSet:
    roots: tuple[complex, ...]
    tol: float

    def __len__(self) -> int:
        return len(self.roots)

    def array(self) -> np.ndarray:
        return np.array(self.roots, dtype=complex)


def _polish(coeffs: np.ndarray, z: np.ndarray, tol: float, budget: int = 200) -> np.ndarray:
    # simultaneous Weierstrass correction; coeffs is monic, highest first
    z = z.astype(complex).copy()
    m = len(z)
    if m == 1:
        return z
    for _ in range(budget):
        vals = np.polyval(coeffs, z)
        diffs = z[:, None] - z[None, :]
        np.fill_diagonal(diffs, 1.0)
        denom = diffs.prod(axis=1)
        if np.any(denom == 0):
            z = z + 1e-12 * np.exp(2j * np.pi * np.arange(m) / m)
            continue
        step = vals / denom
        z = z - step
        if np.max(np.abs(step)) <= 1e-16 * max(1.0, np.max(np.abs(z))):
            break
    return z


def roots(p: Polynomial, tol: float = 1e-12) -> RootSet:
    """All n+1 roots of p, polished so that |p(root)| < tol * scale."""
    if tol <= 0:
        raise InputError("tol must be positive")
    coeffs = p.full()
    m = p.degree
    companion = np.zeros((m, m), dtype=complex)
    companion[0, :] = -coeffs[1:]
    companion[1:, :-1] = np.eye(m - 1)
    guess = np.linalg.eigvals(companion)
    z = _polish(coeffs, guess, tol)
    # a final Newton pass per root tightens residuals after the joint iteration
    dcoeffs = np.polyder(coeffs)
    for _ in range(3):
        dv = np.polyval(dcoeffs, z)
        safe = np.abs(dv) > 0
        z[safe] = z[safe] - np.polyval(coeffs, z[safe]) / dv[safe]
    resid = np.abs(np.polyval(coeffs, z))
    limit = tol * p.scale() * max(1.0, np.max(np.abs(z))) ** m
    if not np.all(np.isfinite(z)) or np.max(resid) > limit:
        raise NonConvergence(f"root polishing failed (max residual {np.max(resid):.3e})")
    order = np.lexsort((z.imag, z.real))
    return RootSet(tuple(complex(v) for v in z[order]), tol)


def discriminant_from_roots(rs: Sequence[complex]) -> complex:
    out = 1.0 + 0j
    rs = list(rs)
    for i in range(len(rs)):
        for j in range(i + 1, len(rs)):
            out *= (rs[i] - rs[j]) ** 2
    return out


def discriminant(p: Polynomial) -> complex:
    return discriminant_from_roots(roots(p).roots)


def is_in_Mn(p: Polynomial) -> bool:
    """Scale-relative simple-root test: |disc| > 1e-12 * scale^{n(n+1)}."""
    n = p.n
    try:
        disc = discriminant(p)
    except NonConvergence:
        return False
    return abs(disc) > 1e-12 * p.scale() ** (n * (n + 1))


def require_Mn(p: Polynomial) -> None:
    if not is_in_Mn(p):
        raise DegenerateInput("polynomial has a repeated root")


def cstar_act(k: complex, p: Polynomial) -> Polynomial:
    """The free C*-action: u_i -> k^{i+1} u_i, so that (k.p)(kz) = k^{n+1} p(z).

    u_i multiplies z^{n-i}, hence carries weight i+1.
    """
    k = complex(k)
    if k == 0:
        raise InputError("k must be nonzero")
    return Polynomial(k ** (i + 2) * u for i, u in enumerate(p.coeffs))


def from_roots(rs: RootSet | Sequence[complex], tol: float = 1e-9) -> Polynomial:
    if isinstance(rs, RootSet):
        tol = rs.tol
        vals = list(rs.roots)
    else:
        vals = [complex(r) for r in rs]
    if len(vals) < 2:
        raise InputError("need at least two roots")
    if abs(sum(vals)) > tol * max(1.0, max(abs(v) for v in vals)):
        raise NotCentered(f"root sum {sum(vals)} exceeds tolerance")
    coeffs = np.poly(np.array(vals, dtype=complex))
    return Polynomial(coeffs[2:])


def match_roots(previous: Sequence[complex], current: Sequence[complex]) -> list[complex]:
    """Reorder ``current`` so that entry i is the root nearest ``previous[i]``."""
    from scipy.optimize import linear_sum_assignment

    prev = np.asarray(previous, dtype=complex)
    cur = np.asarray(current, dtype=complex)
    cost = np.abs(prev[:, None] - cur[None, :])
    rows, cols = linear_sum_assignment(cost)
    out = [0j] * len(prev)
    for r, c in zip(rows, cols):
        out[r] = complex(cur[c])
    return out
