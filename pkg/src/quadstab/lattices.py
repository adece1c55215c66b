"""Integer lattices with the A_n bilinear forms and braid group images.

Matrices act on column vectors of coordinates; column j of a map is the
image of the basis vector alpha_j.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, InputError
from .polyspace import Params


@dataclass(frozen=True)
class BilinearForm:
    mat: np.ndarray
    sign: int  # +1 symmetric (N even), -1 skew (N odd)

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    def to_json(self) -> list[list[int]]:
        return self.mat.tolist()


def an_form(params: Params) -> BilinearForm:
    """Form of the linearly oriented A_n quiver 1 -> 2 -> ... -> n."""
    n, N = params.n, params.N
    sign = 1 if N % 2 == 0 else -1
    mat = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        mat[i, i] = 1 + (-1) ** N
    for i in range(n - 1):
        # one arrow i -> i+1 of color 0: <a_i, a_j> = d_ij + (-1)^N d_ji - (q_ij + (-1)^N q_ji)
        mat[i, i + 1] = -1
        mat[i + 1, i] = -1 if sign == 1 else 1
    return BilinearForm(mat, sign)


def form_from_matrix(mat: np.ndarray) -> BilinearForm:
    mat = np.asarray(mat, dtype=np.int64)
    if np.array_equal(mat, mat.T):
        return BilinearForm(mat, 1)
    if np.array_equal(mat, -mat.T):
        return BilinearForm(mat, -1)
    raise InputError("matrix is neither symmetric nor skew-symmetric")


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"vertex {i} outside 1..{n}")


def reflection(i: int, form: BilinearForm) -> np.ndarray:
    """alpha_j -> alpha_j - <alpha_i, alpha_j> alpha_i."""
    n = form.n
    _check_index(i, n)
    r = np.eye(n, dtype=np.int64)
    r[i - 1, :] -= form.mat[i - 1, :]
    return r


def inverse_unimodular(m: np.ndarray) -> np.ndarray:
    inv = np.linalg.inv(np.asarray(m, dtype=float))
    out = np.rint(inv).astype(np.int64)
    if not np.array_equal(out @ m, np.eye(m.shape[0], dtype=np.int64)):
        raise InputError("matrix is not unimodular")
    return out


def braid_rep(word: Sequence[int], form: BilinearForm) -> np.ndarray:
    """Product of generator images in word order; -i stands for the inverse of sigma_i."""
    n = form.n
    out = np.eye(n, dtype=np.int64)
    for letter in word:
        if letter == 0:
            raise IndexOutOfRange("generator index 0")
        r = reflection(abs(letter), form)
        if letter < 0:
            r = inverse_unimodular(r)
        out = out @ r
    return out


def center_word(n: int) -> list[int]:
    return list(range(1, n + 1)) * (n + 1)


def center_image(params: Params) -> np.ndarray:
    return braid_rep(center_word(params.n), an_form(params))


def is_isometry(m: np.ndarray, form: BilinearForm, target: BilinearForm | None = None) -> bool:
    tgt = form.mat if target is None else target.mat
    return bool(np.array_equal(m.T @ form.mat @ m, tgt))
