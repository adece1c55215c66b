from __future__ import annotations

import numpy as np
import pytest

from quadstab.errors import IndexOutOfRange
from quadstab.lattices import an_form, braid_rep, center_image, is_isometry, reflection
from quadstab.polyspace import Params

NS = (3, 4, 5, 6)


def test_an_form_examples():
    assert an_form(Params(4, 2)).mat.tolist() == [[2, -1], [-1, 2]]
    assert an_form(Params(3, 2)).mat.tolist() == [[0, -1], [1, 0]]
    assert an_form(Params(5, 1)).mat.tolist() == [[0]]
    assert an_form(Params(6, 1)).mat.tolist() == [[2]]


def test_reflection_examples():
    # columns are images of basis vectors
    assert reflection(1, an_form(Params(4, 2))).tolist() == [[-1, 1], [0, 1]]
    assert reflection(1, an_form(Params(3, 2))).tolist() == [[1, 1], [0, 1]]
    assert reflection(1, an_form(Params(4, 1))).tolist() == [[-1]]
    with pytest.raises(IndexOutOfRange):
        reflection(3, an_form(Params(4, 2)))


@pytest.mark.parametrize("N", NS)
@pytest.mark.parametrize("n", range(1, 6))
def test_reflections_are_isometries(N, n):
    form = an_form(Params(N, n))
    for i in range(1, n + 1):
        r = reflection(i, form)
        assert is_isometry(r, form)
        assert round(abs(np.linalg.det(r))) == 1
        if N % 2 == 0:
            assert np.array_equal(r @ r, np.eye(n, dtype=int))


@pytest.mark.parametrize("N", NS)
@pytest.mark.parametrize("n", range(2, 6))
def test_braid_relations(N, n):
    form = an_form(Params(N, n))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if j == i + 1:
                assert np.array_equal(braid_rep([i, j, i], form), braid_rep([j, i, j], form))
            else:
                assert np.array_equal(braid_rep([i, j], form), braid_rep([j, i], form))
        assert np.array_equal(braid_rep([i, -i], form), np.eye(n, dtype=int))


def test_braid_examples():
    form = an_form(Params(3, 2))
    assert np.array_equal(braid_rep([], form), np.eye(2, dtype=int))
    assert np.array_equal(braid_rep([1, 2, 1, 2, 1, 2], form), -np.eye(2, dtype=int))


def test_braid_word_order():
    form = an_form(Params(4, 2))
    r1, r2 = reflection(1, form), reflection(2, form)
    assert np.array_equal(braid_rep([1, 2], form), r1 @ r2)


@pytest.mark.parametrize("N", NS)
@pytest.mark.parametrize("n", range(1, 6))
def test_center_image(N, n):
    sign = 1 if N % 2 == 0 else (-1) ** (n + 1)
    assert np.array_equal(center_image(Params(N, n)), sign * np.eye(n, dtype=int))
