"""Dense linear-algebra helpers: factorizations, ranks, rotations."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schurpole.linalg import (
    jacobi_orthogonalize,
    numerical_rank,
    orthonormal_null_basis,
    qr_decompose,
    svd,
    sym_eig,
)

from conftest import rng_matrix

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=7)


def _char_poly_coeffs(a):
    """Characteristic polynomial of a small matrix by trace recursion.

    Faddeev-LeVerrier: independent of any eigenvalue routine, exact up to
    rounding for the n <= 4 matrices it is used on here.
    """
    n = a.shape[0]
    coeffs = [1.0]
    mk = np.eye(n)
    for k in range(1, n + 1):
        am = a @ mk
        c = -np.trace(am) / k
        coeffs.append(c)
        mk = am + c * np.eye(n)
    return np.array(coeffs)


# ---------------------------------------------------------------------------
# qr_decompose


@given(seeds, dims, dims)
def test_qr_reconstructs_and_is_orthogonal(seed, rows_extra, cols):
    rows = cols + rows_extra - 1
    if rows < cols:
        rows = cols
    a = rng_matrix(seed, rows, cols)
    q, r = qr_decompose(a)
    assert q.shape == (rows, rows)
    assert r.shape == (cols, cols)
    assert np.allclose(q.T @ q, np.eye(rows), atol=1e-12)
    stacked = np.vstack([r, np.zeros((rows - cols, cols))])
    assert np.allclose(q @ stacked, a, atol=1e-12 * max(1.0, np.linalg.norm(a)))
    assert np.allclose(r, np.triu(r))
    assert np.all(np.diag(r) >= 0)


def test_qr_rejects_wide_input():
    with pytest.raises(ValueError):
        qr_decompose(np.ones((2, 3)))


def test_qr_empty_columns():
    q, r = qr_decompose(np.zeros((3, 0)))
    assert q.shape == (3, 3)
    assert r.shape == (0, 0)
    assert np.allclose(q, np.eye(3))


# ---------------------------------------------------------------------------
# svd / numerical_rank / orthonormal_null_basis


@given(seeds, dims, dims)
def test_svd_reconstructs(seed, rows, cols):
    a = rng_matrix(seed, rows, cols)
    u, s, vh = svd(a)
    smat = np.zeros((rows, cols))
    k = min(rows, cols)
    smat[:k, :k] = np.diag(s)
    assert np.allclose(u @ smat @ vh, a, atol=1e-12 * max(1.0, np.linalg.norm(a)))
    assert np.all(np.diff(s) <= 0)


@given(seeds, st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=6))
def test_numerical_rank_of_products(seed, n, k):
    k = min(k, n)
    left = rng_matrix(seed, n, k)
    right = rng_matrix(seed + 1, k, n)
    a = left @ right if k else np.zeros((n, n))
    dec = numerical_rank(a)
    assert dec.rank == k
    assert dec.singular_values.shape == (n,)


def test_numerical_rank_tolerance_override():
    a = np.diag([1.0, 1e-6, 1e-17])
    assert numerical_rank(a).rank == 2  # default cutoff is max(shape)*eps*sigma1
    assert numerical_rank(a, tol=1e-3).rank == 1
    assert numerical_rank(a, tol=1e-18).rank == 3


@given(seeds, st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=6))
def test_null_basis_annihilates(seed, n, k):
    k = min(k, n)
    left = rng_matrix(seed, n, k)
    right = rng_matrix(seed + 1, k, n)
    a = left @ right if k else np.zeros((n, n))
    nb = orthonormal_null_basis(a)
    assert nb.shape == (n, n - k)
    if nb.shape[1]:
        assert np.linalg.norm(a @ nb) <= 1e-10 * max(1.0, np.linalg.norm(a))
        assert np.allclose(nb.T @ nb, np.eye(nb.shape[1]), atol=1e-12)


# ---------------------------------------------------------------------------
# sym_eig


@given(seeds, st.integers(min_value=1, max_value=4))
def test_sym_eig_matches_characteristic_polynomial(seed, n):
    g = rng_matrix(seed, n, n)
    a = g + g.T
    w, v = sym_eig(a)
    # Independent eigenvalue oracle: roots of the characteristic polynomial.
    ref = np.sort(np.roots(_char_poly_coeffs(a)).real)[::-1]
    assert np.allclose(w, ref, atol=1e-8 * max(1.0, np.abs(ref).max()))
    # Decomposition properties.
    assert np.all(np.diff(w) <= 1e-12 * max(1.0, np.abs(w).max()))
    assert np.allclose(a @ v, v @ np.diag(w), atol=1e-10 * max(1.0, np.abs(w).max()))
    assert np.allclose(v.T @ v, np.eye(n), atol=1e-12)
    for k in range(n):
        nz = np.nonzero(v[:, k])[0]
        assert v[nz[0], k] > 0


def test_sym_eig_rejects_asymmetric():
    with pytest.raises(ValueError):
        sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_sym_eig_known_values():
    w, v = sym_eig(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(w, [3.0, 1.0])
    assert np.allclose(v[:, 0], np.array([1.0, 1.0]) / np.sqrt(2))


# ---------------------------------------------------------------------------
# jacobi_orthogonalize


@given(seeds, st.integers(min_value=2, max_value=8))
def test_jacobi_rotation_orthogonalizes(seed, n):
    x = rng_matrix(seed, n, 1).ravel()
    y = rng_matrix(seed + 7, n, 1).ravel()
    c, s = jacobi_orthogonalize(x, y)
    assert np.isclose(c * c + s * s, 1.0, atol=1e-14)
    u = c * x - s * y
    w = s * x + c * y
    scale = np.linalg.norm(x) * np.linalg.norm(y)
    assert abs(u @ w) <= 1e-10 * max(1.0, scale)
    # Angle stays in (-pi/4, pi/4]: the rotation nearest the identity.
    assert c >= np.cos(np.pi / 4.0) - 1e-14


def test_jacobi_orthogonal_input_is_identity():
    assert jacobi_orthogonalize([1.0, 0.0], [0.0, 2.0]) == (1.0, 0.0)


def test_jacobi_dependent_input_raises():
    with pytest.raises(ValueError):
        jacobi_orthogonalize([1.0, 2.0], [2.0, 4.0])
