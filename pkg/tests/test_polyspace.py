from __future__ import annotations

import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quadstab.errors import InputError, NotCentered
from quadstab.polyspace import (
    Params,
    Polynomial,
    cstar_act,
    discriminant,
    from_roots,
    is_in_Mn,
    roots,
)

finite = st.floats(-2.0, 2.0, allow_nan=False)
cplx = st.builds(complex, finite, finite)


def centered(points):
    a = np.array(points, dtype=complex)
    return a - a.mean()


def test_params_d():
    assert Params(4, 1).d == 6
    assert Params(3, 2).d == 5
    assert Params(5, 3).d == 14


@pytest.mark.parametrize("N,n", [(2, 1), (4, 0), (3.5, 1)])
def test_params_rejects(N, n):
    with pytest.raises(InputError):
        Params(N, n)


def test_roots_examples():
    assert np.allclose(roots(Polynomial([-1])).array(), [-1, 1])
    assert np.allclose(roots(Polynomial([-1, 0])).array(), [-1, 0, 1], atol=1e-12)
    rs = roots(Polynomial([0, 1])).array()
    assert abs(rs.sum()) < 1e-12
    assert np.allclose(np.sort_complex(rs), np.sort_complex([cmath.exp(1j * np.pi * (2 * k + 1) / 3) for k in range(3)]))


def test_roots_rejects_bad_tol():
    with pytest.raises(InputError):
        roots(Polynomial([-1]), tol=0)


def test_discriminant_examples():
    assert discriminant(Polynomial([-1])) == pytest.approx(4)
    assert abs(discriminant(Polynomial([0]))) < 1e-12
    assert discriminant(Polynomial([-1, 0])) == pytest.approx(4)
    assert not is_in_Mn(Polynomial([0]))
    assert is_in_Mn(Polynomial([-1, 0]))


def test_discriminant_near_collision():
    for eps in (1e-2, 1e-4):
        p = from_roots(centered([0, eps, 1.0]))
        assert is_in_Mn(p)
    p = from_roots(centered([0, 0, 1.0]))
    assert not is_in_Mn(p)


def test_cstar_examples():
    p = Polynomial([-1, 0.5j])
    assert cstar_act(1, p) == p
    # (k.p)(kz) = k^2 p(z) for n=1 forces the constant term to scale by k^2
    assert np.allclose(cstar_act(2, Polynomial([-1])).coeffs, [-4])


@given(st.lists(cplx, min_size=1, max_size=4), cplx, cplx)
def test_cstar_identity(coeffs, k, z):
    if abs(k) < 0.1:
        k = 1 + 0.5j
    p = Polynomial(coeffs)
    lhs = cstar_act(k, p)(k * z)
    rhs = k ** (p.n + 1) * p(z)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs), abs(k) ** (p.n + 1) * 50)


@given(st.lists(cplx, min_size=3, max_size=3), st.floats(0.3, 2.0), st.floats(-np.pi, np.pi))
def test_roots_equivariant(rts, r, theta):
    a = centered(rts)
    if min(abs(a[i] - a[j]) for i in range(3) for j in range(i)) < 0.1:
        return
    k = r * cmath.exp(1j * theta)
    p = from_roots(a)
    got = roots(cstar_act(k, p)).array()
    for z in k * roots(p).array():
        assert np.min(np.abs(got - z)) < 1e-9


def test_from_roots_examples():
    assert np.allclose(from_roots([-1, 1]).coeffs, [-1])
    assert np.allclose(from_roots([-1, 0, 1]).coeffs, [-1, 0])
    with pytest.raises(NotCentered):
        from_roots([0, 1])


def test_round_trip_random():
    rng = np.random.default_rng(7)
    done = 0
    while done < 100:
        m = rng.integers(2, 5)
        a = centered(rng.normal(size=m) + 1j * rng.normal(size=m))
        if min(abs(a[i] - a[j]) for i in range(m) for j in range(i)) <= 0.1:
            continue
        got = roots(from_roots(a)).array()
        for z in a:
            assert np.min(np.abs(got - z)) < 1e-8
        done += 1


def test_json_round_trip():
    p = Polynomial([0, -1 + 0.5j])
    assert Polynomial.from_json(p.to_json()) == p
