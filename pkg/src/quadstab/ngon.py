"""N-angulations of the d-gon, diagonal rotation, and their colored quivers.

Marked points 0..d-1 are labeled counterclockwise.  An angulation keeps its
diagonals in a stored order; quiver vertex i is the i-th stored diagonal and
rotation replaces a diagonal in place.  Equality and hashing ignore the order.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Any, Iterable, Sequence

import networkx as nx
import numpy as np

from .cquiver import ColoredQuiver
from .errors import DiagonalNotPresent, InvalidAngulation, TooLarge
from .polyspace import Params

Diagonal = tuple[int, int]

MAX_D = 16


def _norm(a: int, b: int) -> Diagonal:
    return (a, b) if a < b else (b, a)


def is_valid_diagonal(a: int, b: int, params: Params) -> bool:
    d, N, n = params.d, params.N, params.n
    if not (0 <= a < d and 0 <= b < d) or a == b:
        return False
    a, b = _norm(a, b)
    gap = b - a - 1
    if gap % (N - 2) != 0:
        return False
    return 1 <= gap // (N - 2) <= n


def crosses(x: Diagonal, y: Diagonal) -> bool:
    a, b = x
    c, e = y
    if len({a, b, c, e}) < 4:
        return False
    return (a < c < b) != (a < e < b)


@dataclass(frozen=True, eq=False)
class NAngulation:
    params: Params
    diagonals: tuple[Diagonal, ...]

    def __init__(self, params: Params, diagonals: Iterable[Sequence[int]], check: bool = True):
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "diagonals", tuple(_norm(int(a), int(b)) for a, b in diagonals))
        if check:
            problems = self.violations()
            if problems:
                raise InvalidAngulation("; ".join(problems))

    def violations(self) -> list[str]:
        out = []
        if len(self.diagonals) != self.params.n:
            out.append(f"expected {self.params.n} diagonals, got {len(self.diagonals)}")
        if len(set(self.diagonals)) != len(self.diagonals):
            out.append("repeated diagonal")
        for a, b in self.diagonals:
            if not is_valid_diagonal(a, b, self.params):
                out.append(f"({a},{b}) is not an (N-2)-diagonal")
        for i, x in enumerate(self.diagonals):
            for y in self.diagonals[i + 1 :]:
                if crosses(x, y):
                    out.append(f"{x} crosses {y}")
        return out

    def key(self) -> tuple[Diagonal, ...]:
        return tuple(sorted(self.diagonals))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NAngulation) and self.params == other.params and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.params, self.key()))

    def __repr__(self) -> str:
        return f"NAngulation(N={self.params.N}, n={self.params.n}, {list(self.diagonals)})"

    def index(self, delta: Sequence[int]) -> int:
        """1-based vertex index of a diagonal."""
        dn = _norm(*delta)
        try:
            return self.diagonals.index(dn) + 1
        except ValueError:
            raise DiagonalNotPresent(f"{dn} not in {list(self.diagonals)}") from None

    def reorder_like(self, reference: Sequence[Diagonal]) -> "NAngulation":
        """Same set, stored so shared diagonals keep their positions in ``reference``."""
        mine = set(self.diagonals)
        order: list[Diagonal | None] = [x if x in mine else None for x in reference]
        rest = [x for x in self.diagonals if x not in set(reference)]
        for i, x in enumerate(order):
            if x is None:
                order[i] = rest.pop(0)
        return NAngulation(self.params, order, check=False)

    def to_json(self) -> dict[str, Any]:
        return {"N": self.params.N, "n": self.params.n, "diagonals": [list(x) for x in self.key()]}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "NAngulation":
        return cls(Params(int(data["N"]), int(data["n"])), [tuple(x) for x in data["diagonals"]])


def pieces(delta: NAngulation) -> list[list[int]]:
    """The N-gons of the subdivision, each as a counterclockwise vertex list."""
    polys = [list(range(delta.params.d))]
    for a, b in delta.diagonals:
        for k, poly in enumerate(polys):
            if a in poly and b in poly:
                ia, ib = poly.index(a), poly.index(b)
                if ia > ib:
                    ia, ib = ib, ia
                inner = poly[ia : ib + 1]
                outer = poly[ib:] + poly[: ia + 1]
                polys[k : k + 1] = [inner, outer]
                break
        else:  # pragma: no cover - excluded by validation
            raise InvalidAngulation(f"diagonal {(a, b)} lies in no piece")
    return polys


def _polygon_around(delta: NAngulation, dn: Diagonal) -> list[int]:
    """Counterclockwise vertices of the union of the two N-gons glued along ``dn``."""
    verts: set[int] = set()
    found = 0
    for poly in pieces(delta):
        edges = {_norm(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))}
        if dn in edges:
            verts.update(poly)
            found += 1
    if found != 2:  # pragma: no cover
        raise InvalidAngulation(f"diagonal {dn} does not border two pieces")
    return sorted(verts)


def _rotate(delta: NAngulation, dn: Sequence[int], step: int) -> NAngulation:
    dn = _norm(*dn)
    v = delta.index(dn) - 1
    poly = _polygon_around(delta, dn)
    m = len(poly)
    a = poly[(poly.index(dn[0]) + step) % m]
    b = poly[(poly.index(dn[1]) + step) % m]
    diags = list(delta.diagonals)
    diags[v] = _norm(a, b)
    return NAngulation(delta.params, diags)


def rotate_forward(delta: NAngulation, dn: Sequence[int]) -> NAngulation:
    """Move both endpoints one step clockwise in the surrounding (2N-2)-gon."""
    return _rotate(delta, dn, -1)


def rotate_backward(delta: NAngulation, dn: Sequence[int]) -> NAngulation:
    return _rotate(delta, dn, +1)


def quiver_of(delta: NAngulation) -> ColoredQuiver:
    """Arrow i -> j of color c when c edges of a shared N-gon run counterclockwise from i to j."""
    params = delta.params
    N, n = params.N, params.n
    index = {x: i for i, x in enumerate(delta.diagonals)}
    q = np.zeros((N - 1, n, n), dtype=np.int64)
    for poly in pieces(delta):
        edges = [_norm(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]
        here = [(pos, index[e]) for pos, e in enumerate(edges) if e in index]
        for p1, i in here:
            for p2, j in here:
                if i != j:
                    q[(p2 - p1 - 1) % N, i, j] += 1
    return ColoredQuiver(params, q)


def fan_angulation(params: Params) -> NAngulation:
    """All diagonals at marked point 0, stored outermost first.

    With this order the quiver is the linear one with color-0 arrows i -> i+1.
    """
    N, n = params.N, params.n
    return NAngulation(params, [(0, (N - 2) * i + 1) for i in range(n, 0, -1)])


def fuss_catalan(params: Params) -> int:
    N, n = params.N, params.n
    return comb((N - 1) * (n + 1), n) // (n + 1)


def _angulate(verts: tuple[int, ...], N: int) -> list[list[Diagonal]]:
    # the N-gon on the edge (verts[0], verts[-1]) splits the rest into smaller polygons
    m = len(verts)
    if m == 2:
        return [[]]
    out: list[list[Diagonal]] = []

    def extend(idx: list[int]) -> None:
        last = idx[-1]
        if len(idx) == N:
            if last != m - 1:
                return
            combos: list[list[Diagonal]] = [[]]
            for a, b in zip(idx, idx[1:]):
                extra = [] if b - a == 1 else [_norm(verts[a], verts[b])]
                parts = _angulate(verts[a : b + 1], N)
                combos = [c + p + extra for c in combos for p in parts]
            out.extend(combos)
            return
        for nxt in range(last + 1, m):
            if (nxt - last - 1) % (N - 2) != 0:
                continue
            if len(idx) == N - 1 and nxt != m - 1:
                continue
            extend(idx + [nxt])

    extend([0])
    return out


def enumerate_angulations(params: Params) -> list[NAngulation]:
    if params.d > MAX_D:
        raise TooLarge(f"d = {params.d} exceeds {MAX_D}")
    raw = _angulate(tuple(range(params.d)), params.N)
    seen = {tuple(sorted(x)) for x in raw}
    return [NAngulation(params, x) for x in sorted(seen)]


def exchange_graph(params: Params) -> nx.MultiDiGraph:
    """Vertices are angulation keys; an edge labeled by the rotated diagonal."""
    graph = nx.MultiDiGraph()
    angs = enumerate_angulations(params)
    for a in angs:
        graph.add_node(a.key(), angulation=a)
    for a in angs:
        for dn in a.diagonals:
            b = rotate_forward(a, dn)
            graph.add_edge(a.key(), b.key(), diagonal=dn, new=b.diagonals[a.index(dn) - 1])
    return graph
