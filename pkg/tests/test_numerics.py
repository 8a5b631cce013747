import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrframes import catalog
from corrframes.errors import DegenerateInputError, InvalidInputError
from corrframes.frame import grammian
from corrframes.numerics import canonical_signs, nearest_isometry, sym_eig


def random_symmetric(n, seed):
    A = np.random.default_rng(seed).standard_normal((n, n))
    return (A + A.T) / 2


def test_identity_eigenvalues():
    res = sym_eig(np.eye(3))
    np.testing.assert_allclose(res.eigenvalues, [1, 1, 1], atol=1e-15)
    np.testing.assert_allclose(res.eigenvectors.T @ res.eigenvectors, np.eye(3), atol=1e-14)


def test_all_ones_quarter():
    res = sym_eig(np.ones((4, 4)) / 4)
    np.testing.assert_allclose(res.eigenvalues, [1, 0, 0, 0], atol=1e-14)


def test_cube_grammian_spectrum():
    G = grammian(catalog.build("cube4"))
    np.testing.assert_allclose(sym_eig(G).eigenvalues, [1, 1, 1, 0], atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5, 9, 16, 33])
def test_matches_lapack(n, backend):
    A = random_symmetric(n, n)
    res = sym_eig(A)
    # oracle: LAPACK's symmetric solver
    np.testing.assert_allclose(res.eigenvalues, np.linalg.eigvalsh(A)[::-1], atol=1e-12)
    np.testing.assert_allclose(res.reconstruct(), A, atol=1e-12)
    assert np.all(np.diff(res.eigenvalues) <= 0)
    assert res.sweeps <= 50


def test_sign_convention():
    res = sym_eig(random_symmetric(6, 3))
    Q = res.eigenvectors
    for k in range(6):
        col = Q[:, k]
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert first > 0


def test_canonical_signs_flips_columns():
    Q = np.array([[0.0, -1.0], [-1.0, 0.0]])
    np.testing.assert_array_equal(canonical_signs(Q), [[0.0, 1.0], [1.0, 0.0]])


def test_rejects_asymmetric():
    with pytest.raises(InvalidInputError):
        sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_rejects_non_square_and_nan():
    with pytest.raises(InvalidInputError):
        sym_eig(np.ones((2, 3)))
    with pytest.raises(InvalidInputError):
        sym_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31))
def test_eigendecomposition_property(n, seed):
    A = random_symmetric(n, seed)
    res = sym_eig(A)
    Q = res.eigenvectors
    np.testing.assert_allclose(Q.T @ Q, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(A @ Q, Q * res.eigenvalues, atol=1e-11)


def test_isometry_fixed_point(rng):
    Q, _ = np.linalg.qr(rng.standard_normal((6, 3)))
    np.testing.assert_allclose(nearest_isometry(Q), Q, atol=1e-12)


def test_scaling_removed():
    np.testing.assert_allclose(nearest_isometry(2 * np.eye(3)), np.eye(3), atol=1e-14)


def test_gaussian_isometry(backend):
    V = np.random.default_rng(7).standard_normal((5, 3))
    W = nearest_isometry(V)
    assert np.max(np.abs(W.T @ W - np.eye(3))) <= 1e-10
    # oracle: polar factor from the SVD, U V^T
    U, _, Vt = np.linalg.svd(V, full_matrices=False)
    np.testing.assert_allclose(W, U @ Vt, atol=1e-12)


def test_rank_deficient_raises():
    V = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    with pytest.raises(DegenerateInputError):
        nearest_isometry(V)
