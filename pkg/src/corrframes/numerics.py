"""Small dense symmetric eigensolver and nearest-isometry (polar) factor.

Matrices are plain two-dimensional float64 NumPy arrays.  Sizes here are
tiny (N <= 64), so the eigensolver is cyclic Jacobi: slow asymptotically but
accurate to a few ulps of ``max|A|``.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DegenerateInputError, InvalidInputError

MAX_SWEEPS = 50
OFFDIAG_RTOL = 1e-14


@dataclass(frozen=True)
class SymEigResult:
    """Eigenvalues sorted descending; eigenvectors in the columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self):
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T


def as_matrix(A, name="matrix"):
    a = np.asarray(A, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidInputError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return a


def max_abs(A):
    return float(np.max(np.abs(A))) if np.size(A) else 0.0


def canonical_signs(Q, atol=1e-12):
    """Flip columns of ``Q`` so the first entry above ``atol`` is positive."""
    Q = np.array(Q, dtype=np.float64, copy=True)
    for k in range(Q.shape[1]):
        col = Q[:, k]
        nz = np.flatnonzero(np.abs(col) > atol)
        if nz.size and col[nz[0]] < 0:
            Q[:, k] = -col
    return Q


def sym_eig(A, tol=1e-10):
    """Eigendecomposition of a real symmetric matrix.

    ``tol`` bounds the accepted asymmetry ``max|A - A^T|`` relative to
    ``max(1, max|A|)``.  Eigenvalues come back in descending order and each
    eigenvector is sign-normalized (first significant entry positive), so the
    output is reproducible.
    """
    a = as_matrix(A, "A")
    n, m = a.shape
    if n != m:
        raise InvalidInputError(f"sym_eig needs a square matrix, got {n}x{m}")
    scale = max(1.0, max_abs(a))
    if max_abs(a - a.T) > tol * scale:
        raise InvalidInputError("sym_eig needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    w, q, sweeps = _backend.kernels().jacobi_eigh(a, OFFDIAG_RTOL * scale, MAX_SWEEPS)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    q = canonical_signs(q[:, order])
    return SymEigResult(eigenvalues=w, eigenvectors=q, sweeps=sweeps)


def nearest_isometry(V, min_singular=1e-12):
    """Closest matrix with orthonormal columns to ``V`` in Frobenius norm.

    Computed as ``V (V^T V)^(-1/2)``; ``V`` must have full column rank.
    """
    v = as_matrix(V, "V")
    n, d = v.shape
    if n < d:
        raise InvalidInputError(f"nearest_isometry needs rows >= cols, got {n}x{d}")
    w, wmin = _backend.kernels().polar_isometry(np.ascontiguousarray(v))
    if w is None or wmin <= min_singular**2:
        raise DegenerateInputError(
            f"matrix is rank deficient (smallest singular value^2 = {wmin:.3g})"
        )
    return w
