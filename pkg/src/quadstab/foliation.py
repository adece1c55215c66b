"""Horizontal foliation of p(z)^{N-2} dz^2 at a given phase.

Separatrices are traced from each zero along its N local rays.  Pairing the
ones that end at zeros gives the saddle trajectories; the ones that escape
are cut at the circle |z| = R_escape, and the planar graph formed by the
separatrices and the arcs of that circle is walked face by face.  A face with
one arc is a half-plane, a face with two arcs is a horizontal strip.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import kernel
from .errors import AmbiguousDirection, DegenerateInput, InputError, NotSaddleFree, Unresolved
from .ngon import NAngulation
from .polyspace import Params, Polynomial, is_in_Mn, roots as find_roots


@dataclass(frozen=True)
class TraceOptions:
    """Tracing tolerances; lengths are relative to the minimal zero distance."""

    step_factor: float = 0.2
    launch: float = 1e-4
    capture: float = 0.3
    hit_radius: float = 1e-5
    hit_tol: float = 1e-7
    near_tol: float = 1e-4
    hausdorff: float = 1e-4
    max_steps: int = 1_000_000
    max_extend: int = 24
    margin: float = 0.25

    def refined(self, factor: float = 10.0) -> "TraceOptions":
        return replace(self, step_factor=self.step_factor / factor)


DEFAULT_OPTIONS = TraceOptions()


@dataclass(frozen=True)
class Terminus:
    kind: str  # "zero", "infinity" or "unresolved"
    index: int = -1

    def __str__(self) -> str:
        if self.kind == "zero":
            return f"Zero({self.index})"
        if self.kind == "infinity":
            return f"Infinity({self.index})"
        return "Unresolved"


@dataclass
class Separatrix:
    zero_index: int
    local_ray: int
    phase: float
    polyline: np.ndarray
    terminus: Terminus
    sigma: int = 1
    angle: float = 0.0
    w_end: complex = 0j
    length: float = 0.0
    near_min: float = math.inf
    arrival_ray: int = -1
    reason: str = ""

    @property
    def key(self) -> tuple[int, int]:
        return (self.zero_index, self.local_ray)


@dataclass
class Strip:
    zeros: tuple[int, int]
    boundary: list[tuple[int, int]]
    arcs: list[tuple[tuple[int, int], tuple[int, int]]]
    directions: tuple[int, int]
    generic: np.ndarray

    @property
    def diagonal(self) -> tuple[int, int]:
        a, b = self.directions
        return (a, b) if a < b else (b, a)


@dataclass
class TrajectoryDecomposition:
    params: Params
    phase: float
    roots: list[complex]
    r_escape: float
    separatrices: list[Separatrix]
    saddles: list[tuple[int, int, np.ndarray]]
    separating: list[Separatrix]
    strips: list[Strip]
    s: int
    t: int
    l: int
    k: int
    near_min: float = math.inf

    def counts(self) -> tuple[int, int, int, int]:
        return (self.s, self.t, self.l, self.k)

    def identities(self) -> dict[str, bool]:
        N, n, d = self.params.N, self.params.n, self.params.d
        return {
            "2s+t=N(n+1)": 2 * self.s + self.t == N * (n + 1),
            "2k+4l=2t": 2 * self.k + 4 * self.l == 2 * self.t,
            "k=d": self.k == d,
            "s+l=n": self.s + self.l == n,
        }


@dataclass(frozen=True)
class SaddleStatus:
    kind: str  # "SaddleFree", "HasSaddle" or "Uncertain"
    count: int = 0
    reason: str = ""

    def __str__(self) -> str:
        if self.kind == "HasSaddle":
            return f"HasSaddle({self.count})"
        return self.kind


@dataclass
class ScanEntry:
    phase: float
    status: str  # "connection" or "unresolved"
    zeros: tuple[int, int] = (-1, -1)
    polyline: np.ndarray | None = None
    length: float = math.nan
    period: complex = complex(math.nan, math.nan)


def escape_radius(p: Polynomial) -> float:
    return 4.0 * (1.0 + max(abs(u) ** (1.0 / (i + 1)) for i, u in enumerate(p.coeffs)))


def direction_coordinate(z: complex, d: int, phase: float) -> float:
    """Continuous sector coordinate; integers are the asymptotic directions."""
    ang = math.atan2(z.imag, z.real)
    return (ang * d / 2.0 - math.pi * phase) / math.pi


def _nearest_direction(z: complex, d: int, phase: float) -> tuple[int, float]:
    x = direction_coordinate(z, d, phase)
    j = round(x)
    return int(j) % d, abs(x - j)


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two polylines (point-to-segment)."""
    return max(_directed(a, b), _directed(b, a))


def _directed(a: np.ndarray, b: np.ndarray) -> float:
    if len(b) == 1:
        return float(np.max(np.abs(a - b[0])))
    p0 = b[:-1]
    seg = b[1:] - p0
    ll = np.abs(seg) ** 2
    ll[ll == 0] = 1.0
    worst = 0.0
    for chunk in np.array_split(a, max(1, len(a) // 512)):
        rel = chunk[:, None] - p0[None, :]
        t = np.clip((rel * seg.conj()[None, :]).real / ll[None, :], 0.0, 1.0)
        dist = np.abs(rel - t * seg[None, :]).min(axis=1)
        worst = max(worst, float(dist.max()))
    return worst


@dataclass
class _Ray:
    angle: float
    z: complex
    f: complex
    w: complex
    sigma: int


class Field:
    """Precomputed data of one differential at one phase."""

    def __init__(self, p: Polynomial, params: Params, phase: float = 0.0,
                 opts: TraceOptions | None = None):
        if p.n != params.n:
            raise InputError(f"polynomial has n = {p.n}, params say n = {params.n}")
        if not is_in_Mn(p):
            raise DegenerateInput("polynomial has a repeated root")
        self.p = p
        self.params = params
        self.N = params.N
        self.phase = float(phase)
        self.opts = opts or DEFAULT_OPTIONS
        self.roots = list(find_roots(p).roots)
        self.coeffs = [complex(c) for c in p.full()]
        self.dcoeffs = [complex(c) for c in p.derivative()]
        rs = np.array(self.roots)
        gaps = np.abs(rs[:, None] - rs[None, :])
        np.fill_diagonal(gaps, np.inf)
        self.min_dist = float(gaps.min())
        self.scale = p.scale()
        self.r_escape = escape_radius(p)
        self.rot = cmath.exp(1j * math.pi * self.phase)
        self.w_scale = self._w_scale()
        self._rays: dict[int, list[_Ray]] = {}

    def f(self, z: complex, ref: complex = 1.0 + 0j) -> complex:
        return kernel.fvalue(self.coeffs, self.N, complex(z), complex(ref))

    def segment_integral(self, a: complex, b: complex) -> complex:
        """Integral of f along the straight segment between two zeros."""
        mid = 0.5 * (a + b)
        fm = self.f(mid)
        return (kernel.local_integral(self.coeffs, self.N, mid, fm, b)
                - kernel.local_integral(self.coeffs, self.N, mid, fm, a))

    def _w_scale(self) -> float:
        vals = [
            abs(self.segment_integral(a, b))
            for i, a in enumerate(self.roots)
            for b in self.roots[i + 1:]
        ]
        return max(min(vals), 1e-300)

    @property
    def eps_launch(self) -> float:
        return self.opts.launch * self.min_dist

    @property
    def eps_hit(self) -> float:
        return min(self.opts.hit_radius * self.scale, 1e-2 * self.min_dist)

    def rays(self, a_idx: int) -> list[_Ray]:
        if a_idx in self._rays:
            return self._rays[a_idx]
        N = self.N
        a = self.roots[a_idx]
        dp = np.polyval(self.dcoeffs, a)
        irot = self.rot.conjugate()
        base = (2.0 / N) * (math.pi * self.phase - 0.5 * (N - 2) * cmath.phase(dp))
        base %= 2.0 * math.pi / N
        eps = self.eps_launch
        out = []
        for k in range(N):
            beta = base + 2.0 * math.pi * k / N
            for _ in range(6):
                e = cmath.exp(1j * beta)
                z = a + eps * e
                fz = self.f(z)
                w = -kernel.local_integral(self.coeffs, N, z, fz, a)
                g = (irot * w).imag
                dg = (irot * fz * 1j * eps * e).imag
                if dg == 0.0:
                    break
                step = g / dg
                beta -= step
                if abs(step) < 1e-15:
                    break
            z = a + eps * cmath.exp(1j * beta)
            fz = self.f(z)
            w = -kernel.local_integral(self.coeffs, N, z, fz, a)
            sigma = 1 if (irot * w).real > 0 else -1
            out.append(_Ray(beta, z, fz, w, sigma))
        self._rays[a_idx] = out
        return out

    def arrival_ray(self, b_idx: int, z: complex) -> int:
        b = self.roots[b_idx]
        ang = cmath.phase(z - b)
        best, best_gap = -1, math.inf
        for k, ray in enumerate(self.rays(b_idx)):
            gap = abs((ang - ray.angle + math.pi) % (2.0 * math.pi) - math.pi)
            if gap < best_gap:
                best, best_gap = k, gap
        return best

    def trace(self, z0: complex, f0: complex, w0: complex, level: float, sigma: int,
              r_stop: float, skip: int):
        o = self.opts
        return kernel.trace_leaf(
            self.coeffs, self.roots, self.N, self.phase, complex(z0), complex(f0), complex(w0),
            float(level), float(sigma), o.step_factor, float(r_stop), o.capture * self.min_dist,
            self.eps_hit, o.hit_tol, self.w_scale, o.max_steps, skip,
        )

    def direction_of(self, z: complex, f: complex, w: complex, level: float, sigma: int) -> int:
        """Asymptotic direction of the leaf through z, continuing outward if needed."""
        d = self.params.d
        j, off = _nearest_direction(z, d, self.phase)
        radius = abs(z)
        for _ in range(self.opts.max_extend):
            if off <= self.opts.margin:
                return j
            radius *= 2.0
            pts, code, _, w, _, f, _, _ = self.trace(z, f, w, level, sigma, radius, -1)
            if code != kernel.ESCAPED:
                break
            z = pts[-1]
            j, off = _nearest_direction(z, d, self.phase)
        if off <= self.opts.margin:
            return j
        raise AmbiguousDirection(f"direction of the leaf through {z} stays within the sector margin")

    def separatrix(self, a_idx: int, k: int) -> Separatrix:
        ray = self.rays(a_idx)[k]
        a = self.roots[a_idx]
        pts, code, hit, w_end, near_min, f_end, _, length = self.trace(
            ray.z, ray.f, ray.w, 0.0, ray.sigma, self.r_escape, a_idx
        )
        length += kernel.local_abs_integral(self.coeffs, self.N, ray.z, a)
        poly = np.array([a] + list(pts), dtype=complex)
        sep = Separatrix(a_idx, k, self.phase, poly, Terminus("unresolved"), ray.sigma,
                         ray.angle, w_end, length, near_min)
        if code == kernel.HIT:
            sep.terminus = Terminus("zero", hit)
            sep.arrival_ray = self.arrival_ray(hit, _approach_point(poly))
        elif code == kernel.ESCAPED:
            try:
                j = self.direction_of(poly[-1], f_end, w_end, 0.0, ray.sigma)
            except AmbiguousDirection as exc:
                sep.reason = str(exc)
            else:
                sep.terminus = Terminus("infinity", j)
        else:
            sep.reason = "step budget exhausted" if code == kernel.BUDGET else "branch jump"
        return sep

    def separatrices(self) -> list[Separatrix]:
        return [self.separatrix(a, k) for a in range(len(self.roots)) for k in range(self.N)]

    def path_integral(self, pts: Sequence[complex], f0: complex | None = None) -> tuple[complex, complex]:
        """Integral of f along a polyline with Gauss-Legendre on each chord.

        The branch is continued from ``f0`` (or the principal one) at pts[0];
        returns the integral and f at the last point.
        """
        fprev = self.f(pts[0]) if f0 is None else complex(f0)
        acc = 0j
        for za, zb in zip(pts[:-1], pts[1:]):
            half = 0.5 * (zb - za)
            mid = 0.5 * (za + zb)
            part = 0j
            for x, wt in zip(kernel._kernel_py._GL_X, kernel._kernel_py._GL_W):
                fv = self.f(mid + half * x, fprev)
                fprev = fv
                part += wt * fv
            acc += part * half
            fprev = self.f(zb, fprev)
        return acc, fprev

    def strip_interior_point(self, sep: Separatrix, width: float, steps: int = 32) -> tuple[complex, complex]:
        """Point halfway across the strip to the left of ``sep``, and f there.

        In the coordinate w the strip is a straight band, so the segment from a
        boundary point perpendicular to it stays inside; it is followed by
        continuation with Newton corrections.
        """
        a = self.roots[sep.zero_index]
        poly = sep.polyline
        far = np.nonzero(np.abs(poly - a) >= 0.5 * self.min_dist)[0]
        idx = int(far[0]) if len(far) else len(poly) - 2
        idx = min(max(idx, 1), len(poly) - 2)
        z = complex(poly[idx])
        fz = self.f(z)
        tangent = complex(poly[idx + 1] - poly[idx - 1])
        ahead = fz * tangent
        move = 1j * ahead / abs(ahead) * (0.5 * width)
        w = 0j
        roots = np.asarray(self.roots)
        for k in range(1, steps + 1):
            target = move * k / steps
            for _ in range(60):
                gap = target - w
                if abs(gap) <= 1e-14 * width:
                    break
                dz = gap / fz
                room = 0.25 * float(np.min(np.abs(roots - z)))
                if abs(dz) > room:
                    dz *= room / abs(dz)
                dw, fn = self.path_integral([z, z + dz], fz)
                z, fz, w = z + dz, fn, w + dw
        if abs(move - w) > 1e-8 * width:
            raise Unresolved("could not reach the middle of a strip")
        return z, fz

    def generic_through(self, z: complex, fz: complex) -> tuple[np.ndarray, tuple[int, int]]:
        """Trace the leaf through an interior point to infinity in both senses."""
        ends = []
        polys = []
        for sigma in (-1, 1):
            pts, code, _, w, _, f_end, _, _ = self.trace(z, fz, 0j, 0.0, sigma, self.r_escape, -1)
            if code != kernel.ESCAPED:
                raise Unresolved("generic trajectory did not escape")
            ends.append(self.direction_of(pts[-1], f_end, w, 0.0, sigma))
            polys.append(pts)
        line = np.array(polys[0][::-1] + polys[1][1:], dtype=complex)
        return line, (ends[0], ends[1])


def separatrices(p: Polynomial, params: Params, phase: float = 0.0,
                 opts: TraceOptions | None = None) -> list[Separatrix]:
    return Field(p, params, phase, opts).separatrices()


def _approach_point(poly: np.ndarray, factor: float = 4.0) -> complex:
    """A point on the incoming prong of a trace that ends at a zero.

    A trace stopped at its closest passage sits between two prongs, so look
    back to where it was a few passing distances away.
    """
    b = poly[-1]
    dist = np.abs(poly[:-1] - b)
    far = np.nonzero(dist >= factor * dist[-1])[0]
    return complex(poly[far[-1]] if far.size else poly[-2])


def _pair_saddles(fld: Field, seps: list[Separatrix]) -> list[Separatrix]:
    """One separatrix per saddle trajectory, after checking it from both ends."""
    by_key = {s.key: s for s in seps}
    saddles = []
    tol = fld.opts.hausdorff * fld.scale
    for sep in seps:
        if sep.terminus.kind != "zero":
            continue
        other = by_key[(sep.terminus.index, sep.arrival_ray)]
        if other.terminus != Terminus("zero", sep.zero_index) or other.arrival_ray != sep.local_ray:
            raise Unresolved(f"saddle from {sep.key} is not confirmed from its other end")
        if sep.key < other.key:
            if hausdorff(sep.polyline, other.polyline[::-1]) > tol:
                raise Unresolved(f"the two traces of the saddle at {sep.key} disagree")
            saddles.append(sep)
    return saddles


def _faces(fld: Field, seps: list[Separatrix]):
    """Walk the faces of the separatrix graph cut by the escape circle."""
    N = fld.N
    by_key = {s.key: s for s in seps}
    escaping = [s for s in seps if s.terminus.kind == "infinity"]
    escaping.sort(key=lambda s: math.atan2(s.polyline[-1].imag, s.polyline[-1].real) % (2 * math.pi))
    keys = [s.key for s in escaping]
    pos = {key: i for i, key in enumerate(keys)}
    t = len(keys)

    def nxt(key):
        return keys[(pos[key] + 1) % t]

    def prv(key):
        return keys[(pos[key] - 1) % t]

    def twin(dart):
        kind, key = dart
        if kind == "z":
            sep = by_key[key]
            if sep.terminus.kind == "infinity":
                return ("in", key)
            return ("z", (sep.terminus.index, sep.arrival_ray))
        if kind == "in":
            return ("z", key)
        if kind == "next":
            return ("prev", nxt(key))
        return ("next", prv(key))

    def pred(dart):
        # counterclockwise order at a crossing is: next arc, inward separatrix, previous arc
        kind, key = dart
        if kind == "z":
            return ("z", (key[0], (key[1] - 1) % N))
        return {"in": ("next", key), "prev": ("in", key), "next": ("prev", key)}[kind]

    darts = [("z", s.key) for s in seps]
    darts += [(kind, key) for key in keys for kind in ("in", "next", "prev")]
    seen: set = set()
    faces = []
    for start in darts:
        if start in seen:
            continue
        cycle = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            cycle.append(dart)
            dart = pred(twin(dart))
        if dart != start:
            raise Unresolved("inconsistent rotation system")
        faces.append(cycle)
    return faces, nxt


def classify(p: Polynomial, params: Params, phase: float = 0.0,
             opts: TraceOptions | None = None) -> TrajectoryDecomposition:
    fld = Field(p, params, phase, opts)
    seps = fld.separatrices()
    bad = [s for s in seps if s.terminus.kind == "unresolved"]
    if bad:
        raise Unresolved(f"{len(bad)} separatrices unresolved ({bad[0].reason})")
    saddles = [(s.zero_index, s.terminus.index, s.polyline) for s in _pair_saddles(fld, seps)]
    by_key = {s.key: s for s in seps}
    faces, nxt = _faces(fld, seps)
    d = params.d
    halfplanes = 0
    strips: list[Strip] = []
    covered = []
    for face in faces:
        arcs = [key for kind, key in face if kind == "next"]
        if not arcs:
            if all(kind == "prev" for kind, _ in face):
                continue
            raise Unresolved("a face without an arc at infinity")
        if len(arcs) == 1:
            a = by_key[arcs[0]].terminus.index
            b = by_key[nxt(arcs[0])].terminus.index
            if b != (a + 1) % d:
                raise Unresolved(f"half-plane joins directions {a} and {b}")
            covered.append(a)
            halfplanes += 1
        elif len(arcs) == 2:
            dirs = []
            for key in arcs:
                a = by_key[key].terminus.index
                if by_key[nxt(key)].terminus.index != a:
                    raise Unresolved("strip end spans two directions")
                dirs.append(a)
            e1, e2 = arcs[0], nxt(arcs[0])
            path = _arc_path(fld.r_escape, by_key[e1].polyline, by_key[e2].polyline)
            width = abs((fld.rot.conjugate() * fld.path_integral(path[1:-1])[0]).imag)
            inner, f_inner = fld.strip_interior_point(by_key[e1], width)
            generic, ends = fld.generic_through(inner, f_inner)
            if sorted(ends) != sorted(dirs):
                raise Unresolved("generic trajectory does not join the two ends of its strip")
            strips.append(Strip(
                zeros=(e1[0], e2[0]),
                boundary=[key for kind, key in face if kind == "z"] + [key for kind, key in face if kind == "in"],
                arcs=[(key, nxt(key)) for key in arcs],
                directions=(dirs[0], dirs[1]),
                generic=generic,
            ))
        else:
            raise Unresolved(f"a face with {len(arcs)} arcs at infinity")
    if sorted(covered) != list(range(d)) and halfplanes == d:
        raise Unresolved("half-planes do not cover every direction once")
    strips.sort(key=lambda s: s.diagonal)
    separating = [s for s in seps if s.terminus.kind == "infinity"]
    near = min((s.near_min for s in seps if s.terminus.kind != "zero"), default=math.inf)
    dec = TrajectoryDecomposition(
        params, fld.phase, fld.roots, fld.r_escape, seps, saddles, separating, strips,
        s=len(saddles), t=len(separating), l=len(strips), k=halfplanes, near_min=near,
    )
    failed = [name for name, ok in dec.identities().items() if not ok]
    if failed:
        raise Unresolved(f"counting identities fail: {', '.join(failed)} at {dec.counts()}")
    return dec


def is_saddle_free(p: Polynomial, params: Params, phase: float = 0.0,
                   opts: TraceOptions | None = None) -> SaddleStatus:
    try:
        dec = classify(p, params, phase, opts)
    except (Unresolved, AmbiguousDirection) as exc:
        return SaddleStatus("Uncertain", reason=str(exc))
    o = opts or DEFAULT_OPTIONS
    if dec.near_min < o.near_tol:
        return SaddleStatus("Uncertain", reason=f"near miss at relative gap {dec.near_min:.2e}")
    if dec.s == 0:
        return SaddleStatus("SaddleFree")
    return SaddleStatus("HasSaddle", dec.s)


def saddle_free_decomposition(p: Polynomial, params: Params, phase: float = 0.0,
                              opts: TraceOptions | None = None) -> TrajectoryDecomposition:
    """classify, certified saddle-free with no near misses."""
    try:
        dec = classify(p, params, phase, opts)
    except (Unresolved, AmbiguousDirection) as exc:
        raise NotSaddleFree(f"classification uncertain: {exc}") from exc
    o = opts or DEFAULT_OPTIONS
    if dec.s:
        raise NotSaddleFree(f"{dec.s} saddle trajectories")
    if dec.near_min < o.near_tol:
        raise NotSaddleFree(f"near a wall (relative gap {dec.near_min:.2e})")
    return dec


def angulation_from(dec: TrajectoryDecomposition) -> NAngulation:
    return NAngulation(dec.params, [s.diagonal for s in dec.strips])


def angulation_of(p: Polynomial, params: Params, phase: float = 0.0,
                  opts: TraceOptions | None = None) -> NAngulation:
    return angulation_from(saddle_free_decomposition(p, params, phase, opts))


def asymptotic_direction(tail, p: Polynomial, params: Params, phase: float = 0.0,
                         opts: TraceOptions | None = None) -> int:
    """Index j of the direction arg z = 2 pi (j + phase) / d approached by a leaf."""
    pts = np.atleast_1d(np.asarray(tail, dtype=complex))
    z = complex(pts[-1])
    j, off = _nearest_direction(z, params.d, phase)
    o = opts or DEFAULT_OPTIONS
    if off <= o.margin:
        return j
    fld = Field(p, params, phase, opts)
    f0 = fld.f(z)
    u = fld.rot * f0.conjugate()
    sigma = 1 if (u * z.conjugate()).real > 0 else -1
    return fld.direction_of(z, f0, 0j, 0.0, sigma)


def _arc_path(radius: float, out: np.ndarray, back_in: np.ndarray, arc_step: float = 0.02) -> np.ndarray:
    back = back_in[::-1]
    x1, x2 = out[-1], back[0]
    a1 = math.atan2(x1.imag, x1.real)
    span = (math.atan2(x2.imag, x2.real) - a1) % (2 * math.pi)
    m = max(2, int(math.ceil(span / arc_step)))
    arc = radius * np.exp(1j * (a1 + span * np.arange(1, m) / m))
    return np.concatenate([out, arc, back])


def strip_path(dec: TrajectoryDecomposition, strip: Strip) -> np.ndarray:
    """Path from one boundary zero of the strip to the other around its end at infinity.

    It runs out along one separatrix, along the escape circle, and back in
    along the next separatrix, so it is homotopic to the standard saddle
    connection crossing the strip.
    """
    by_key = {s.key: s for s in dec.separatrices}
    e1, e2 = strip.arcs[0]
    return _arc_path(dec.r_escape, by_key[e1].polyline, by_key[e2].polyline)


def saddle_scan(p: Polynomial, params: Params, phase_grid: Sequence[float],
                opts: TraceOptions | None = None) -> list[ScanEntry]:
    """Saddle connections found at each phase of the grid."""
    out: list[ScanEntry] = []
    lift = 1.0 if params.N % 2 == 0 else 2.0
    for theta in phase_grid:
        fld = Field(p, params, float(theta), opts)
        seps = fld.separatrices()
        try:
            if any(s.terminus.kind == "unresolved" for s in seps):
                raise Unresolved("unresolved separatrix")
            saddles = _pair_saddles(fld, seps)
        except Unresolved:
            out.append(ScanEntry(float(theta), "unresolved"))
            continue
        for sep in saddles:
            w = sep.w_end * (1 if (sep.w_end * fld.rot.conjugate()).real > 0 else -1)
            out.append(ScanEntry(float(theta), "connection", (sep.zero_index, sep.terminus.index),
                                 sep.polyline, lift * sep.length, lift * w))
    return out
