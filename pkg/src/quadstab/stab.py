"""Stability points of saddle-free differentials and how they change across walls.

A heart is recorded only through its N-angulation; a stability point is that
N-angulation together with the charges of its simples, which are the periods
of the standard saddle classes.  Every wall passed appends to ``basis_log``
the matrix taking the new chamber's standard coordinates to the old ones.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cquiver import ColoredQuiver, fv_map, fv_map_backward
from .errors import (
    NonAdjacentJump,
    NotSaddleFree,
    PhaseExit,
    PreconditionFailed,
    Unresolved,
    UnresolvedWall,
)
from .foliation import TraceOptions, classify
from .ngon import NAngulation, quiver_of, rotate_backward, rotate_forward
from .periods import Chamber, chamber_of, gm_wall_cross, phase_of
from .periods import chain_roots
from .polyspace import Params, Polynomial, cstar_act, from_roots

_EDGE = 1e-12


@dataclass
class StabilityPoint:
    heart: NAngulation
    charge: np.ndarray
    basis_log: list[np.ndarray] = field(default_factory=list)

    def phases(self) -> list[float]:
        return [_phase(z) for z in self.charge]

    def interior(self) -> bool:
        return all(0.0 < ph < 1.0 for ph in self.phases())

    def by_diagonal(self) -> dict:
        return dict(zip(self.heart.diagonals, self.charge))


@dataclass(frozen=True)
class WallEvent:
    t_star: float
    vertex: int  # 1-based position of the rotated diagonal
    direction: str  # "forward" or "backward"
    width: float  # length of the final bracketing interval


@dataclass
class WalkResult:
    events: list[WallEvent]
    composite: np.ndarray  # final standard coordinates -> initial ones
    final: StabilityPoint
    final_chamber: Chamber


def _phase(z: complex) -> float:
    """Phase in (-1, 1], snapping values within rounding of 0 or 1."""
    ph = phase_of(z)
    if ph < -1 + _EDGE:
        return 1.0
    if -_EDGE < ph <= 0:
        return 0.0
    return ph


def sigma_of(p: Polynomial, params: Params, opts: TraceOptions | None = None) -> StabilityPoint:
    ch = chamber_of(p, params, opts=opts)
    return StabilityPoint(ch.angulation, ch.periods.copy())


def tilt_forward_K(Q: ColoredQuiver, v: int) -> np.ndarray:
    """K-theory shadow of the forward simple tilt at v."""
    return fv_map(Q, v)


def tilt_backward_K(Q: ColoredQuiver, v: int) -> np.ndarray:
    return fv_map_backward(Q, v)


def _wall_matrix(a: NAngulation, b: NAngulation, v: int, direction: str) -> np.ndarray:
    """Coordinates in chamber a of the standard classes of chamber b.

    ``b`` is stored in a's order.  Going forward, b is the primed side and
    the wall matrix is read off b's quiver; going backward a is the primed
    side and the matrix is inverted (it is an involution).
    """
    if direction == "forward":
        return gm_wall_cross(quiver_of(b), v)
    m = gm_wall_cross(quiver_of(a), v)
    return np.rint(np.linalg.inv(m)).astype(np.int64)


# ------------------------------------------------------------------ C-action

def c_act(t: complex, sigma: StabilityPoint, resolve: bool = False) -> StabilityPoint:
    """Charges times exp(-i pi t), relabelling the heart through walls if asked.

    Re t shifts every phase by -Re t.  When a simple's phase would leave
    (0, 1] the heart is tilted at that vertex and the charges are rewritten in
    the new basis; crossings are processed in the order they occur.
    """
    t = complex(t)
    heart = sigma.heart
    log = list(sigma.basis_log)
    charge = np.asarray(sigma.charge, dtype=complex) * math.exp(math.pi * t.imag)
    remaining = t.real
    while True:
        phases = np.array([_phase(z) for z in charge])
        if np.any(phases < 0):
            raise PhaseExit("a charge lies outside the semi-closed upper half-plane")
        gaps = phases if remaining >= 0 else 1.0 - phases
        k = int(np.argmin(gaps))
        step = float(gaps[k])
        if (remaining >= 0 and step > remaining) or (remaining < 0 and step >= -remaining):
            charge = charge * cmath.exp(-1j * math.pi * remaining)
            break
        if not resolve:
            raise PhaseExit(f"simple {k + 1} leaves the semi-closed upper half-plane")
        sign = 1.0 if remaining >= 0 else -1.0
        charge = charge * cmath.exp(-1j * math.pi * sign * step)
        remaining -= sign * step
        dn = heart.diagonals[k]
        if sign > 0:
            new = rotate_forward(heart, dn).reorder_like(heart.diagonals)
            m = _wall_matrix(heart, new, k + 1, "forward")
        else:
            new = rotate_backward(heart, dn).reorder_like(heart.diagonals)
            m = _wall_matrix(heart, new, k + 1, "backward")
        # column j of m is the old coordinates of new class j
        charge = m.T @ charge
        heart = new
        log.append(m)
        if sign < 0 and remaining == 0:
            break
    return StabilityPoint(heart, charge, log)


# ---------------------------------------------------------------- walking

def _chamber_or_none(p: Polynomial, params: Params, like, opts) -> Chamber | None:
    try:
        return chamber_of(p, params, like, opts)
    except (NotSaddleFree, Unresolved):
        return None


def _relation(a: NAngulation, b: NAngulation) -> tuple[int, str] | None:
    """(1-based vertex, direction) if b, stored in a's order, is one rotation of a."""
    diff = [i for i in range(len(a.diagonals)) if a.diagonals[i] != b.diagonals[i]]
    if len(diff) != 1:
        return None
    i = diff[0]
    dn = a.diagonals[i]
    if rotate_forward(a, dn).key() == b.key():
        return i + 1, "forward"  # also the backward flip when N = 3
    if rotate_backward(a, dn).key() == b.key():
        return i + 1, "backward"
    return None


def _interp(p: Polynomial, q: Polynomial, s: float) -> Polynomial:
    return Polynomial((1 - s) * a + s * b for a, b in zip(p.coeffs, q.coeffs))


class _Walker:
    def __init__(self, params: Params, opts, tol: float, coarse: float, total: float):
        self.params = params
        self.opts = opts
        self.tol = tol * total
        self.coarse = coarse * total
        self.events: list[WallEvent] = []
        self.composite = np.eye(params.n, dtype=np.int64)

    def cross(self, a: Chamber, b: Chamber, ta: float, tb: float) -> Chamber:
        """Walls between chambers a and b on the segment a.p -> b.p; returns b in final order."""
        pa, pb = a.p, b.p
        lo, hi = 0.0, 1.0
        lo_c, hi_c = a, b.reordered(a.angulation)
        while (tb - ta) * (hi - lo) > self.tol:
            mid = 0.5 * (lo + hi)
            cm = _chamber_or_none(_interp(pa, pb, mid), self.params, lo_c.angulation, self.opts)
            if cm is None:
                if (tb - ta) * (hi - lo) > self.coarse:
                    raise UnresolvedWall(f"no certified point near t={ta + (tb - ta) * mid:.6g}")
                break
            if cm.angulation.key() == lo_c.angulation.key():
                lo, lo_c = mid, cm
            elif cm.angulation.key() == hi_c.angulation.key():
                hi, hi_c = mid, cm
            else:
                tm = ta + (tb - ta) * mid
                left = self.cross(lo_c, cm, ta + (tb - ta) * lo, tm)
                right = self.cross(left, hi_c, tm, ta + (tb - ta) * hi)
                return b.reordered(right.angulation)
        hi_c = hi_c.reordered(lo_c.angulation)
        rel = _relation(lo_c.angulation, hi_c.angulation)
        if rel is None:
            raise NonAdjacentJump(f"{lo_c.angulation} and {hi_c.angulation} are not adjacent")
        v, direction = rel
        # the crossing class has phase near 0 on the unprimed side; for N = 3
        # forward and backward flips coincide, so only this decides
        by_charge = "forward" if phase_of(lo_c.periods[v - 1]) < 0.5 else "backward"
        if self.params.N > 3 and by_charge != direction:
            raise NonAdjacentJump("rotation direction disagrees with the charges at the wall")
        direction = by_charge
        self.composite = self.composite @ _wall_matrix(lo_c.angulation, hi_c.angulation, v, direction)
        self.events.append(WallEvent(ta + (tb - ta) * 0.5 * (lo + hi), v, direction, (tb - ta) * (hi - lo)))
        return b.reordered(hi_c.angulation)


def chamber_walk(path: Sequence[Polynomial], params: Params, start: NAngulation | None = None,
                 opts: TraceOptions | None = None, tol: float = 1e-8,
                 coarse: float = 1e-2) -> WalkResult:
    """Follow chambers along a sampled path, composing wall maps.

    Samples are joined by straight segments in coefficient space and indexed
    by t = 0, 1, ..., len(path) - 1.  A change of N-angulation between
    neighbours is bracketed by bisection down to ``tol`` times the path
    length, or until the midpoint can no longer be certified saddle-free; a
    bracket still wider than ``coarse`` times the length at that point is an
    unresolved wall.  Uncertifiable samples are skipped.
    """
    m = len(path)
    if m == 0:
        raise PreconditionFailed("empty path")
    cur = _chamber_or_none(path[0], params, start, opts)
    if cur is None:
        raise PreconditionFailed("path must start at a saddle-free point")
    walker = _Walker(params, opts, tol, coarse, max(1, m - 1))
    cur_t = 0.0
    for i in range(1, m):
        nxt = _chamber_or_none(path[i], params, cur.angulation, opts)
        if nxt is None:
            if i == m - 1:
                raise PreconditionFailed("path must end at a saddle-free point")
            continue
        if nxt.angulation.key() != cur.angulation.key():
            nxt = walker.cross(cur, nxt, cur_t, float(i))
        cur, cur_t = nxt, float(i)
    final = StabilityPoint(cur.angulation, cur.periods.copy(), [walker.composite])
    return WalkResult(walker.events, walker.composite, final, cur)


def half_twist_path(p: Polynomial, i: int, steps: int = 64) -> list[Polynomial]:
    """Closed path swapping chain roots i and i+1 clockwise about their midpoint."""
    rs = chain_roots(p)
    if not 1 <= i < len(rs):
        raise PreconditionFailed(f"no chain segment {i}")
    c = 0.5 * (rs[i - 1] + rs[i])
    a = rs[i - 1] - c
    out = []
    for s in np.linspace(0.0, 1.0, steps + 1):
        e = cmath.exp(-1j * math.pi * s)
        moved = list(rs)
        moved[i - 1] = c + a * e
        moved[i] = c - a * e
        out.append(from_roots(moved))
    out[0] = out[-1] = p
    return out


# ------------------------------------------------------------ wall checks

@dataclass
class WallRow:
    r: float
    heart: NAngulation
    heart_sharp: NAngulation
    vertex: int
    rotation_ok: bool
    gap: float


@dataclass
class WallReport:
    rows: list[WallRow]
    monotone: bool

    @property
    def final_gap(self) -> float:
        return self.rows[-1].gap


def rotate_charges(p: Polynomial, params: Params, r: float) -> Polynomial:
    """The point whose periods are exp(i pi r) times those of p."""
    return cstar_act(cmath.exp(2j * math.pi * r / params.d), p)


def wall_point(p: Polynomial, params: Params, opts: TraceOptions | None = None) -> Polynomial:
    """A point with exactly one saddle: rotate p until its lowest-phase simple is real."""
    ch = chamber_of(p, params, opts=opts)
    theta = min(phase_of(z) for z in ch.periods)
    return rotate_charges(p, params, -theta)


def wall_cross_check(p1: Polynomial, params: Params, rs: Sequence[float],
                     opts: TraceOptions | None = None) -> WallReport:
    """Compare the chambers on both sides of the wall through p1.

    phi(r) has periods exp(+i pi r) times those of p1 and phi#(r) has
    exp(-i pi r); the saddle class of p1 thus has small positive phase on
    the phi side.  Each row records whether the phi# angulation is the
    forward rotation of the phi angulation at the new diagonal, and the
    largest difference between the phi# charges and the phi charges carried
    over by the wall matrix.
    """
    dec = classify(p1, params, 0.0, opts)
    if dec.s != 1:
        raise PreconditionFailed(f"expected exactly one saddle trajectory, found {dec.s}")
    rows = []
    for r in rs:
        a = chamber_of(rotate_charges(p1, params, r), params, opts=opts)
        b = chamber_of(rotate_charges(p1, params, -r), params, a.angulation, opts)
        diff = [i for i in range(params.n) if a.angulation.diagonals[i] != b.angulation.diagonals[i]]
        if len(diff) != 1:
            raise NonAdjacentJump(f"r={r}: {a.angulation} and {b.angulation} differ in {len(diff)} places")
        v = diff[0] + 1
        ok = rotate_forward(a.angulation, a.angulation.diagonals[v - 1]).key() == b.angulation.key()
        m = gm_wall_cross(quiver_of(b.angulation), v)
        gap = float(np.max(np.abs(b.periods - m.T @ a.periods)))
        rows.append(WallRow(float(r), a.angulation, b.angulation, v, ok, gap))
    gaps = [row.gap for row in rows]
    return WallReport(rows, all(x > y for x, y in zip(gaps, gaps[1:])))


# ---------------------------------------------------------------- support

@dataclass(frozen=True)
class SupportReport:
    min_mass: float
    constant: float


def support_report(sigma: StabilityPoint) -> SupportReport:
    """min |Z(S_i)| and max ||[S_i]|| / |Z(S_i)| with unit coordinate norms."""
    masses = np.abs(np.asarray(sigma.charge))
    return SupportReport(float(masses.min()), float(np.max(1.0 / masses)))
