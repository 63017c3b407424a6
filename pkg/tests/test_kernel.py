"""Compiled and pure-Python reduction kernels against each other and against
an exact rational rank oracle."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadtope.homology import BACKEND, betti, random_complex
from quadtope.homology.kernel import python_reduce_columns, reduce_columns


def to_csc(dense):
    n_rows, n_cols = dense.shape
    indptr, indices, data = [0], [], []
    for j in range(n_cols):
        for i in range(n_rows):
            if dense[i, j]:
                indices.append(i)
                data.append(int(dense[i, j]))
        indptr.append(len(indices))
    return (
        np.array(indptr, dtype=np.int64),
        np.array(indices, dtype=np.int32),
        np.array(data, dtype=np.int64),
    )


def rational_rank(dense):
    a = [[Fraction(int(v)) for v in row] for row in dense]
    rank, rows, cols = 0, len(a), len(a[0]) if a else 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rows):
            if r != rank and a[r][c] != 0:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def gf2_rank(dense):
    a = (np.asarray(dense) % 2).astype(np.uint8)
    rank = 0
    for c in range(a.shape[1]):
        piv = next((r for r in range(rank, a.shape[0]) if a[r, c]), None)
        if piv is None:
            continue
        a[[rank, piv]] = a[[piv, rank]]
        for r in range(a.shape[0]):
            if r != rank and a[r, c]:
                a[r] ^= a[rank]
        rank += 1
    return rank


matrices = st.tuples(st.integers(1, 9), st.integers(1, 9), st.integers(0, 10**6)).map(
    lambda t: np.random.default_rng(t[2]).integers(-2, 3, size=(t[0], t[1])) * (np.random.default_rng(t[2] + 1).random((t[0], t[1])) < 0.5)
)


@given(matrices)
def test_kernels_agree_with_exact_rank(dense):
    args = to_csc(dense)
    skip = np.zeros(dense.shape[1], dtype=np.uint8)
    q = 2147483647
    r_py = python_reduce_columns(dense.shape[0], *args, q, skip)
    r_c = reduce_columns(dense.shape[0], *args, q, skip)
    assert r_py[0] == r_c[0] == rational_rank(dense)
    assert list(r_py[1]) == list(r_c[1]) and list(r_py[2]) == list(r_c[2])
    g_py = python_reduce_columns(dense.shape[0], *args, 2, skip)
    g_c = reduce_columns(dense.shape[0], *args, 2, skip)
    assert g_py[0] == g_c[0] == gf2_rank(dense)


def test_skip_mask_drops_columns():
    dense = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    args = to_csc(dense)
    skip = np.array([0, 1, 0], dtype=np.uint8)
    for f in (python_reduce_columns, reduce_columns):
        assert f(3, *args, 3, skip)[0] == rational_rank(dense[:, [0, 2]])


@pytest.mark.parametrize("seed", range(10))
def test_betti_identical_across_backends(seed):
    K = random_complex(np.random.default_rng(seed), n_vertices=10, n_faces=25, max_dim=3)
    assert betti(K, "Q") == betti(K, "Q", reducer=python_reduce_columns)
    assert betti(K, 2) == betti(K, 2, reducer=python_reduce_columns)


def test_backend_is_reported():
    assert BACKEND in ("cython", "python")
