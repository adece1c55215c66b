from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from quadstab.acceptance import half_twist_base, loop_monodromy
from quadstab.cquiver import ColoredQuiver, mutate_forward, quiver_form
from quadstab.errors import NotSaddleFree, PhaseExit, PreconditionFailed
from quadstab.foliation import classify, saddle_scan
from quadstab.lattices import an_form, inverse_unimodular, reflection
from quadstab.ngon import enumerate_angulations, fan_angulation, quiver_of
from quadstab.periods import (
    c_action_framed,
    chain_periods,
    framed,
    orient_upper,
    period_map,
    phase_of,
    picard_lefschetz,
)
from quadstab.polyspace import Params, Polynomial, cstar_act, from_roots
from quadstab.stab import (
    StabilityPoint,
    c_act,
    chamber_walk,
    half_twist_path,
    rotate_charges,
    sigma_of,
    support_report,
    tilt_backward_K,
    tilt_forward_K,
    wall_cross_check,
    wall_point,
)

Z2 = Polynomial([-1])
GENERIC = cstar_act(cmath.exp(1j * math.pi / 10), Polynomial([-1, 0.3j]))


def test_sigma_of_examples():
    P = Params(4, 1)
    for r in (0.2, 0.02):
        sig = sigma_of(rotate_charges(Z2, P, r), P)
        (z,) = sig.charge
        assert abs(z) == pytest.approx(4 / 3, abs=1e-12)
        assert sig.phases()[0] == pytest.approx(r, abs=1e-9)
    odd = sigma_of(Z2, Params(3, 1))
    assert odd.phases() == [pytest.approx(0.5, abs=1e-9)]
    assert abs(odd.charge[0]) == pytest.approx(math.pi, abs=1e-9)
    with pytest.raises(NotSaddleFree):
        sigma_of(Z2, P)


def test_tilt_examples():
    for N in (3, 4, 5):
        assert tilt_forward_K(ColoredQuiver.zero(Params(N, 1)), 1).tolist() == [[-1]]
    fan = quiver_of(fan_angulation(Params(4, 2)))
    assert tilt_forward_K(fan, 1).tolist() == [[-1, 1], [0, 1]]


@pytest.mark.parametrize("N,n", [(3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (6, 2)])
def test_tilts_invert(N, n):
    for D in enumerate_angulations(Params(N, n)):
        Q = quiver_of(D)
        for v in range(1, n + 1):
            M = mutate_forward(Q, v)
            assert np.array_equal(tilt_forward_K(Q, v) @ tilt_backward_K(M, v), np.eye(n, dtype=int))


@pytest.mark.parametrize("N,n", [(3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (6, 2)])
def test_iterated_tilt_is_inverse_reflection(N, n):
    # N - 1 forward tilts at one tracked vertex give the inverse twist at K-level;
    # each step's matrix is read off the quiver on the far side of the step
    for D in enumerate_angulations(Params(N, n)):
        Q0 = quiver_of(D)
        for v in range(1, n + 1):
            Q, M = Q0, np.eye(n, dtype=np.int64)
            for _ in range(N - 1):
                Q = mutate_forward(Q, v)
                M = M @ tilt_forward_K(Q, v)
            assert Q == Q0
            assert np.array_equal(M, inverse_unimodular(reflection(v, quiver_form(Q0))))


def test_c_act_trivial_cases():
    sig = sigma_of(GENERIC, Params(4, 2))
    same = c_act(0, sig)
    assert np.array_equal(same.charge, sig.charge) and same.heart == sig.heart
    scaled = c_act(0.4j, sig)
    assert np.allclose(scaled.phases(), sig.phases(), atol=1e-12)
    assert np.allclose(np.abs(scaled.charge), math.exp(0.4 * math.pi) * np.abs(sig.charge))
    with pytest.raises(PhaseExit):
        c_act(1.5, sig)


@pytest.mark.parametrize("N,t", [(4, 0.05), (4, 0.7), (3, 0.9), (5, -0.6), (4, 2.0)])
def test_c_act_routes_agree(N, t):
    P = Params(N, 2)
    fd = framed(GENERIC, P)
    sig = c_act(t, StabilityPoint(fd.chamber.angulation, fd.chamber.periods), resolve=True)
    moved = c_action_framed(t, fd)
    other = sigma_of(moved.p, P)
    assert sig.heart == other.heart
    a, b = sig.by_diagonal(), other.by_diagonal()
    assert max(abs(a[k] - b[k]) for k in a) < 1e-8
    assert np.allclose(period_map(moved), cmath.exp(-1j * math.pi * t) * period_map(fd), atol=1e-8)


def test_constant_walk():
    P = Params(4, 2)
    walk = chamber_walk([GENERIC] * 5, P)
    assert walk.events == []
    assert np.array_equal(walk.composite, np.eye(2, dtype=int))


def test_walk_rejects_wall_start():
    with pytest.raises(PreconditionFailed):
        chamber_walk([Z2, cstar_act(1j, Z2)], Params(4, 1))


@pytest.mark.parametrize("N", [3, 4, 5])
def test_half_twist_monodromy(N):
    P = Params(N, 2)
    path = half_twist_path(half_twist_base(), 1, 64)
    assert path[-1] == path[0]
    m, walk = loop_monodromy(path, P)
    assert np.array_equal(m, picard_lefschetz(1, an_form(P)))
    assert all(0 <= e.t_star <= len(path) - 1 for e in walk.events)


def test_orbit_walk_matches_framed_transport():
    P = Params(4, 2)
    fd = framed(GENERIC, P)
    d = P.d
    t = 1.0
    path = [cstar_act(cmath.exp(-2j * math.pi * t * s / d), GENERIC) for s in np.linspace(0, 1, 25)]
    walk = chamber_walk(path, P, start=fd.chamber.angulation)
    assert walk.events
    # the composite turns final standard coordinates into initial ones
    assert np.allclose(walk.composite.T @ (cmath.exp(-1j * math.pi * t) * fd.chamber.periods),
                       walk.final_chamber.periods, atol=1e-8)
    moved = c_action_framed(t, fd)
    assert np.array_equal(moved.framing, inverse_unimodular(walk.composite))


def test_wall_cross_precondition():
    with pytest.raises(PreconditionFailed):
        wall_cross_check(GENERIC, Params(4, 2), [0.1])


def test_wall_cross_n1():
    P = Params(4, 1)
    rs = (0.1, 0.05, 0.01)
    rep = wall_cross_check(Z2, P, rs)
    assert all(row.rotation_ok for row in rep.rows)
    assert rep.monotone
    # with exact periods the matched charges differ by the rotation itself
    for row, r in zip(rep.rows, rs):
        assert row.gap == pytest.approx(2 * (4 / 3) * math.sin(math.pi * r), rel=1e-8)


def test_wall_point_has_one_saddle():
    P = Params(3, 2)
    p1 = wall_point(Polynomial([0, -1j]), P)
    assert classify(p1, P).s == 1
    rep = wall_cross_check(p1, P, (0.1, 0.05, 0.01))
    assert all(row.rotation_ok for row in rep.rows) and rep.monotone


def test_support_report():
    sig = sigma_of(GENERIC, Params(4, 2))
    rep = support_report(sig)
    assert rep.min_mass == pytest.approx(min(abs(z) for z in sig.charge))
    assert 0 < rep.min_mass and math.isfinite(rep.constant)
    assert sig.interior()


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_mass_equals_length(N):
    P = Params(N, 1)
    rng = np.random.default_rng(N)
    for _ in range(2):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        p = from_roots(a - a.mean())
        z = orient_upper(chain_periods(p, P)[0])
        hits = [e for e in saddle_scan(p, P, [phase_of(z)]) if e.status == "connection"]
        assert len(hits) == 1
        assert hits[0].length == pytest.approx(abs(z), rel=1e-6)
