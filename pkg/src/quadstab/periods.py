"""Periods of p(z)^{(N-2)/2} dz, framings, the period map and its Jacobian.

Homology classes are integer vectors in one of two bases:

* the standard saddle basis of a saddle-free chamber, one class per
  horizontal strip, ordered like the diagonals of the chamber's N-angulation;
* the A_n chain basis, straight segments between consecutive roots.

For N odd the integrand has a square root and a class is a lifted cycle on
the double cover, whose period is twice the integral along the path in C.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernel
from .cquiver import ColoredQuiver, fv_map, quiver_form
from .errors import (
    BasisMismatch,
    BranchAmbiguity,
    ChamberExit,
    InputError,
    NotSaddleFree,
    TransportFailure,
    Unresolved,
    WrongParity,
)
from .foliation import (
    Field,
    TraceOptions,
    TrajectoryDecomposition,
    saddle_free_decomposition,
    strip_path,
)
from .lattices import BilinearForm, an_form, reflection
from .ngon import NAngulation
from .polyspace import Params, Polynomial, cstar_act, match_roots, roots as find_roots

_GX, _GW = np.polynomial.legendre.leggauss(10)


def lift_factor(params: Params) -> float:
    return 1.0 if params.N % 2 == 0 else 2.0


def integrand_poly(p: Polynomial, params: Params) -> np.ndarray:
    """Coefficients of p^{(N-2)/2}, highest first (N even)."""
    if params.N % 2:
        raise WrongParity("the integrand is a polynomial only for N even")
    out = np.array([1.0 + 0j])
    for _ in range((params.N - 2) // 2):
        out = np.polymul(out, p.full())
    return out


def period_even(p: Polynomial, params: Params, a: complex, b: complex) -> complex:
    """Exact integral of p^{(N-2)/2} from a to b via the polynomial antiderivative."""
    prim = np.polyint(integrand_poly(p, params))
    return complex(np.polyval(prim, b) - np.polyval(prim, a))


def _refine(pts: np.ndarray, zeros: np.ndarray, ratio: float, floor: float) -> np.ndarray:
    """Subdivide chords so each is shorter than ``ratio`` times its distance to the zeros."""
    out = [complex(pts[0])]

    def dist(z: complex) -> float:
        return float(np.min(np.abs(zeros - z)))

    for za, zb in zip(pts[:-1], pts[1:]):
        stack = [(complex(za), complex(zb))]
        chunk = []
        while stack:
            a, b = stack.pop()
            ln = abs(b - a)
            dm = min(dist(a), dist(b), dist(0.5 * (a + b)))
            if dm < floor:
                raise BranchAmbiguity("path passes through a zero")
            if ln > ratio * dm:
                mid = 0.5 * (a + b)
                stack.append((mid, b))
                stack.append((a, mid))
            else:
                chunk.append(b)
        out.extend(chunk)
    return np.array(out, dtype=complex)


def polyline_integral(p: Polynomial, params: Params, path: Sequence[complex],
                      start_zero: bool = False, end_zero: bool = False,
                      zeros: Sequence[complex] | None = None) -> complex:
    """Integral of p^{(N-2)/2} dz along a polyline, continuing the square root.

    The branch is the principal one at the first regular point.  An endpoint
    flagged as a zero is handled by the substitution z = a + (q - a) s^2 on a
    short final piece, which removes the branch-point singularity.
    """
    N = params.N
    pts = np.asarray(path, dtype=complex)
    if len(pts) < 2 or (len(pts) == 2 and pts[0] == pts[1]):
        return 0j
    zs = np.asarray(find_roots(p).roots if zeros is None else zeros, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(zs))))
    coeffs = [complex(c) for c in p.full()]

    def cut(a: complex, towards: complex) -> complex:
        others = zs[np.abs(zs - a) > 1e-12 * scale]
        room = float(np.min(np.abs(others - a))) if len(others) else abs(towards - a)
        rho = min(abs(towards - a) * 0.5, 0.25 * room)
        return a + rho * (towards - a) / abs(towards - a)

    head = tail = None
    if start_zero:
        head = complex(pts[0])
        pts = np.concatenate([[cut(head, complex(pts[1]))], pts[1:]])
    if end_zero:
        tail = complex(pts[-1])
        pts = np.concatenate([pts[:-1], [cut(tail, complex(pts[-2]))]])
    fine = _refine(pts, zs, 0.25, 1e-13 * scale)
    half = 0.5 * (fine[1:] - fine[:-1])
    mid = 0.5 * (fine[1:] + fine[:-1])
    nodes = mid[:, None] + half[:, None] * _GX[None, :]
    # node sequence along the path: chord start, its Gauss nodes, ..., final point
    seq = np.concatenate([np.concatenate([fine[:-1, None], nodes], axis=1).ravel(), fine[-1:]])
    pv = np.polyval(np.array(coeffs), seq)
    if N % 2 == 0:
        fv = pv ** ((N - 2) // 2)
    else:
        fv = np.sqrt(pv) * pv ** ((N - 3) // 2)
        prod = fv[1:] * fv[:-1].conj()
        flips = np.where(prod.real < 0, -1.0, 1.0)
        signs = np.concatenate([[1.0], np.cumprod(flips)])
        fv = fv * signs
        turn = np.abs(np.angle(fv[1:] * fv[:-1].conj()))
        if np.any(turn > 0.25 * math.pi):
            raise BranchAmbiguity("the square root turns too fast between samples; refine the path")
    m = len(fine) - 1
    body = fv[:-1].reshape(m, 11)[:, 1:]
    total = complex(np.sum(half * (body @ _GW)))
    if head is not None:
        total += -kernel.local_integral(coeffs, N, complex(fine[0]), complex(fv[0]), head)
    if tail is not None:
        total += kernel.local_integral(coeffs, N, complex(fine[-1]), complex(fv[-1]), tail)
    return total


def period_odd(p: Polynomial, params: Params, path: Sequence[complex]) -> complex:
    """Period of the lifted cycle over a path joining two zeros (N odd)."""
    if params.N % 2 == 0:
        raise WrongParity("period_odd needs N odd")
    pts = np.asarray(path, dtype=complex)
    if len(pts) < 2 or abs(pts[-1] - pts[0]) == 0 and len(pts) == 2:
        return 0j
    return 2.0 * polyline_integral(p, params, pts, start_zero=True, end_zero=True)


def orient_upper(z: complex) -> complex:
    """The one of +z, -z with phase in (0, pi]."""
    if z.imag < 0 or (z.imag == 0 and z.real > 0):
        return -z
    return z


def orient_real(z: complex) -> complex:
    """Orientation of a saddle class at phase 0: the period made positive."""
    return -z if z.real < 0 else z


def phase_of(z: complex) -> float:
    """Phase in (-1, 1] with z = |z| e^{i pi phase}."""
    return math.atan2(z.imag, z.real) / math.pi


# ---------------------------------------------------------------- chain basis

def chain_roots(p: Polynomial, reference: Sequence[complex] | None = None) -> list[complex]:
    """Roots in chain order: by real part, or matched to a reference ordering."""
    rs = list(find_roots(p).roots)
    if reference is not None:
        return match_roots(reference, rs)
    return sorted(rs, key=lambda z: (z.real, z.imag))


def chain_periods(p: Polynomial, params: Params, order: Sequence[complex] | None = None) -> np.ndarray:
    """Periods of the chain classes r_i -> r_{i+1} along straight segments."""
    rs = chain_roots(p, order)
    out = np.zeros(params.n, dtype=complex)
    for i in range(params.n):
        a, b = rs[i], rs[i + 1]
        if params.N % 2 == 0:
            out[i] = period_even(p, params, a, b)
        else:
            out[i] = 2.0 * polyline_integral(p, params, [a, b], True, True, rs)
    return out


# ------------------------------------------------------------ standard basis

def _interior_path(fld: Field, dec: TrajectoryDecomposition, strip, steps: int = 48) -> np.ndarray:
    """A path inside the strip joining its two boundary zeros.

    In w the strip is a band and the standard saddle connection is the
    straight segment between the images of the zeros.  Starting on a boundary
    separatrix, the path follows that straight line by continuation with
    Newton corrections and closes straight into the far zero.
    """
    by_key = {s.key: s for s in dec.separatrices}
    e1, e2 = strip.arcs[0]
    sep = by_key[e1]
    z1 = fld.roots[sep.zero_index]
    z2 = fld.roots[by_key[e2].zero_index]
    poly = sep.polyline
    far = np.nonzero(np.abs(poly - z1) >= 0.5 * fld.min_dist)[0]
    idx = int(far[0]) if len(far) else len(poly) - 2
    idx = max(idx, 1)
    # reference branch: principal at the first traced point of the separatrix
    f_ref = fld.f(poly[1])
    head, f_q = fld.path_integral(poly[1: idx + 1], f_ref)
    around, _ = fld.path_integral(strip_path(dec, strip)[1:-1], f_ref)
    target = around - head
    z = complex(poly[idx])
    fz = f_q
    w = 0j
    pts = [complex(x) for x in poly[: idx + 1]]
    radius = 0.25 * fld.min_dist
    done = False
    for k in range(1, steps + 1):
        goal = target * k / steps
        for _ in range(12):
            gap = goal - w
            if abs(gap) <= 1e-13 * (abs(target) + fld.w_scale):
                break
            dz = gap / fz
            room = 0.5 * float(np.min(np.abs(np.asarray(fld.roots) - z)))
            if abs(dz) > room:
                dz *= room / abs(dz)
            dw, fn = fld.path_integral([z, z + dz], fz)
            z, fz, w = z + dz, fn, w + dw
            pts.append(z)
            if abs(z - z2) < radius:
                done = True
                break
        if done:
            break
    if not done:
        raise TransportFailure("continuation across the strip did not reach the far zero")
    pts.append(z2)
    return np.array(pts, dtype=complex)


def standard_periods(p: Polynomial, params: Params, dec: TrajectoryDecomposition,
                     fld: Field | None = None) -> np.ndarray:
    """Period of each standard saddle class, in strip order, oriented into the upper half-plane."""
    fld = fld or Field(p, params, dec.phase)
    out = np.zeros(len(dec.strips), dtype=complex)
    for i, strip in enumerate(dec.strips):
        z1, z2 = (fld.roots[k] for k in strip.zeros)
        if params.N % 2 == 0:
            val = period_even(p, params, z1, z2)
        else:
            try:
                path = _interior_path(fld, dec, strip)
            except TransportFailure:
                # very thin strips defeat the continuation; the route around
                # the strip's end at infinity is in the same class
                path = strip_path(dec, strip)
            val = 2.0 * polyline_integral(p, params, path, True, True, fld.roots)
        val = orient_upper(val)
        if not 0.0 < phase_of(val) < 1.0:
            raise NotSaddleFree(f"standard class {i + 1} has phase {phase_of(val)}")
        out[i] = val
    return out


@dataclass
class Chamber:
    """A saddle-free differential with its N-angulation and standard periods.

    ``angulation`` fixes the vertex order; ``periods[i]`` belongs to the strip
    whose generic trajectory gives diagonal i.
    """

    p: Polynomial
    params: Params
    decomposition: TrajectoryDecomposition
    angulation: NAngulation
    periods: np.ndarray

    @property
    def quiver(self) -> ColoredQuiver:
        from .ngon import quiver_of

        return quiver_of(self.angulation)

    def reordered(self, like: NAngulation) -> "Chamber":
        """Same chamber with shared diagonals moved to their positions in ``like``."""
        ang = self.angulation.reorder_like(like.diagonals)
        by_diag = dict(zip(self.angulation.diagonals, self.periods))
        vals = np.array([by_diag[dn] for dn in ang.diagonals], dtype=complex)
        return Chamber(self.p, self.params, self.decomposition, ang, vals)

    def strip_for(self, i: int):
        dn = self.angulation.diagonals[i]
        for s in self.decomposition.strips:
            if s.diagonal == dn:
                return s
        raise BasisMismatch(f"no strip for diagonal {dn}")


def chamber_of(p: Polynomial, params: Params, like: NAngulation | Sequence | None = None,
               opts: TraceOptions | None = None) -> Chamber:
    """Certify p saddle-free and compute its standard periods.

    ``like`` is a reference order of diagonals; shared diagonals keep their
    positions so that vertex labels persist across a wall.
    """
    dec = saddle_free_decomposition(p, params, 0.0, opts)
    fld = Field(p, params, 0.0, opts)
    vals = standard_periods(p, params, dec, fld)
    by_diag = {s.diagonal: v for s, v in zip(dec.strips, vals)}
    ang = NAngulation(params, [s.diagonal for s in dec.strips])
    if like is not None:
        ref = like.diagonals if isinstance(like, NAngulation) else [tuple(x) for x in like]
        ang = ang.reorder_like(ref)
    periods = np.array([by_diag[dn] for dn in ang.diagonals], dtype=complex)
    return Chamber(p, params, dec, ang, periods)


# ---------------------------------------------------------------- framings

@dataclass(frozen=True)
class HomClass:
    coords: tuple[int, ...]
    basis: tuple  # ("standard", angulation key) or ("chain",)


@dataclass
class FramedDifferential:
    """A saddle-free differential with a framing in its standard saddle basis.

    Column i of ``framing`` holds the standard coordinates of generator i.
    """

    chamber: Chamber
    framing: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.framing, dtype=np.int64)
        if m.shape != (self.chamber.params.n,) * 2 or round(abs(np.linalg.det(m))) != 1:
            raise InputError("a framing must be a unimodular n x n integer matrix")
        self.framing = m

    @property
    def p(self) -> Polynomial:
        return self.chamber.p

    @property
    def params(self) -> Params:
        return self.chamber.params

    def basis_tag(self) -> tuple:
        return ("standard", self.chamber.angulation.key())


def framed(p: Polynomial, params: Params, framing: np.ndarray | None = None,
           like=None, opts: TraceOptions | None = None) -> FramedDifferential:
    ch = chamber_of(p, params, like, opts)
    m = np.eye(params.n, dtype=np.int64) if framing is None else framing
    return FramedDifferential(ch, m)


def period_of_class(fd: FramedDifferential, cls: HomClass) -> complex:
    c = np.asarray(cls.coords, dtype=np.int64)
    if len(c) != fd.params.n:
        raise BasisMismatch(f"class has {len(c)} coordinates, expected {fd.params.n}")
    if cls.basis[0] == "standard":
        if tuple(cls.basis[1]) != fd.basis_tag()[1]:
            raise BasisMismatch("class is expressed in another chamber's basis")
        return complex(c @ fd.chamber.periods)
    if cls.basis[0] == "chain":
        return complex(c @ chain_periods(fd.p, fd.params))
    raise BasisMismatch(f"unknown basis {cls.basis[0]!r}")


def period_map(fd: FramedDifferential) -> np.ndarray:
    return fd.chamber.periods @ fd.framing


@dataclass
class JacobianResult:
    matrix: np.ndarray
    det: complex
    cr_residual: float


def _shifted(p: Polynomial, j: int, delta: complex) -> Polynomial:
    c = list(p.coeffs)
    c[j] += delta
    return Polynomial(c)


def period_jacobian(fd: FramedDifferential, h: float | None = None,
                    opts: TraceOptions | None = None) -> JacobianResult:
    """Central differences of the period map in each coefficient u_j.

    Real and imaginary steps are both taken; their mismatch is the
    Cauchy-Riemann residual.
    """
    p, params = fd.p, fd.params
    h = 1e-6 * p.scale() if h is None else h
    n = params.n
    ref = fd.chamber.angulation
    cols_re = np.zeros((n, n), dtype=complex)
    cols_im = np.zeros((n, n), dtype=complex)

    def values(q: Polynomial) -> np.ndarray:
        try:
            ch = chamber_of(q, params, ref, opts)
        except NotSaddleFree as exc:
            raise ChamberExit(f"perturbed point left the chamber: {exc}") from exc
        if ch.angulation.key() != ref.key():
            raise ChamberExit("perturbed point lies in another chamber")
        return ch.periods @ fd.framing

    for j in range(n):
        cols_re[:, j] = (values(_shifted(p, j, h)) - values(_shifted(p, j, -h))) / (2 * h)
        cols_im[:, j] = (values(_shifted(p, j, 1j * h)) - values(_shifted(p, j, -1j * h))) / (2j * h)
    resid = float(np.max(np.abs(cols_re - cols_im)) / max(1.0, float(np.max(np.abs(cols_re)))))
    return JacobianResult(cols_re, complex(np.linalg.det(cols_re)), resid)


def chain_jacobian(p: Polynomial, params: Params, h: float | None = None) -> JacobianResult:
    """Jacobian of the chain-basis periods; needs no saddle-free certificate."""
    h = 1e-6 * p.scale() if h is None else h
    order = chain_roots(p)
    n = params.n
    jr = np.zeros((n, n), dtype=complex)
    ji = np.zeros((n, n), dtype=complex)
    for j in range(n):
        jr[:, j] = (chain_periods(_shifted(p, j, h), params, order)
                    - chain_periods(_shifted(p, j, -h), params, order)) / (2 * h)
        ji[:, j] = (chain_periods(_shifted(p, j, 1j * h), params, order)
                    - chain_periods(_shifted(p, j, -1j * h), params, order)) / (2j * h)
    resid = float(np.max(np.abs(jr - ji)) / max(1.0, float(np.max(np.abs(jr)))))
    return JacobianResult(jr, complex(np.linalg.det(jr)), resid)


# ------------------------------------------------------- monodromy and walls

def picard_lefschetz(i: int, form: BilinearForm) -> np.ndarray:
    """beta -> beta - <gamma_i, beta> gamma_i in the chain basis."""
    return reflection(i, form)


def gm_wall_cross(Q: ColoredQuiver, v: int) -> np.ndarray:
    """Gauss-Manin map across one wall, primed standard classes in unprimed ones.

    ``Q`` is the quiver of the primed chamber, the side where the class of
    vertex v has phase near 1.  Column j holds the unprimed coordinates of
    gamma'_j: gamma'_v -> -gamma_v and gamma'_j -> gamma_j + q^(0)_{vj} gamma_v.
    Charges then satisfy Z' = M^T Z in the limit at the wall.
    """
    return fv_map(Q, v)


def _probe_periods(ch: Chamber, order: list[complex], h: float) -> tuple[list, list]:
    p, params = ch.p, ch.params
    rows_s = [ch.periods]
    rows_c = [chain_periods(p, params, order)]
    for j in range(params.n):
        for delta in (h, 1j * h):
            q = _shifted(p, j, delta)
            other = chamber_of(q, params, ch.angulation)
            if other.angulation.key() != ch.angulation.key():
                raise ChamberExit("probe point for the basis change left the chamber")
            rows_s.append(other.periods)
            rows_c.append(chain_periods(q, params, order))
    return rows_s, rows_c


def standard_to_chain(ch: Chamber, h: float | None = None) -> np.ndarray:
    """Integer matrix whose column i is the chain-basis coordinates of standard class i.

    For N even the chain classes are the segments r_i -> r_{i+1}; for N odd
    their sheets are chosen so that the matrix is an isometry from the
    quiver form to the A_n form, which fixes them up to a common sign.

    Found from period data: standard and chain periods at the point and at
    nearby points of the same chamber give an overdetermined real system whose
    solution must round to integers.
    """
    p, params = ch.p, ch.params
    n = params.n
    order = chain_roots(p)
    steps = [h] if h is not None else [1e-3 * p.scale() * 10.0 ** -k for k in range(4)]
    for step in steps:
        try:
            rows_s, rows_c = _probe_periods(ch, order, step)
            break
        except (ChamberExit, NotSaddleFree):
            if step == steps[-1]:
                raise ChamberExit("probe points for the basis change left the chamber") from None
    S = np.array(rows_s)
    C = np.array(rows_c)
    A = np.vstack([C.real, C.imag])
    B = np.vstack([S.real, S.imag])
    sol, *_ = np.linalg.lstsq(A, B, rcond=None)
    out = np.rint(sol).astype(np.int64)
    if np.max(np.abs(sol - out)) > 1e-4 or round(abs(np.linalg.det(out))) != 1:
        raise BasisMismatch("standard classes are not an integral chain combination")
    # Orient the chain classes so the identification carries the quiver form
    # to the A_n form.  For N even the straight-segment orientation already
    # does; for N odd each lifted chain class has an arbitrary sheet.
    target = quiver_form(ch.quiver).mat
    chain = an_form(params).mat
    for signs in itertools.product((1, -1), repeat=n - 1):
        S = np.diag((1, *signs)).astype(np.int64)
        cand = S @ out
        if np.array_equal(cand.T @ chain @ cand, target):
            return cand
    raise BasisMismatch("no chain orientation makes the identification an isometry")


def c_action_framed(t: complex, fd: FramedDifferential, steps: int | None = None,
                    opts: TraceOptions | None = None) -> FramedDifferential:
    """t . (phi, framing): rotate/scale the differential, transporting the framing.

    The framing is carried along the orbit s -> exp(-2 pi i s t / d) . p,
    s in [0, 1], composing wall maps at every chamber change.
    """
    from .stab import chamber_walk

    t = complex(t)
    params = fd.params
    if t == 0:
        return fd
    d = params.d
    steps = steps or max(8, int(math.ceil(16 * abs(t.real))) + 8)
    path = [cstar_act(cmath.exp(-2j * math.pi * t * s / d), fd.p) for s in np.linspace(0.0, 1.0, steps + 1)]
    walk = chamber_walk(path, params, start=fd.chamber.angulation, opts=opts)
    inv = np.rint(np.linalg.inv(walk.composite)).astype(np.int64)
    return FramedDifferential(walk.final_chamber, inv @ fd.framing)
