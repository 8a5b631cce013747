"""Pure-Python/NumPy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` operation for operation and are used when the
compiled extension is unavailable.  Every function takes and returns
C-contiguous float64 arrays.
"""

import math

import numpy as np

NAME = "python"


def jacobi_eigh(A, tol, max_sweeps):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns ``(w, Q, sweeps)`` with eigenvalues in diagonal order (unsorted)
    and eigenvectors in the columns of ``Q``.  Iteration stops once the
    largest off-diagonal magnitude drops below ``tol`` or after
    ``max_sweeps`` full sweeps.
    """
    a = np.array(A, dtype=np.float64, order="C", copy=True)
    n = a.shape[0]
    q = np.eye(n)
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                v = abs(a[i, j])
                if v > off:
                    off = v
        if off < tol:
            break
        sweeps += 1
        for p in range(n - 1):
            for r in range(p + 1, n):
                apq = a[p, r]
                if apq == 0.0:
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp = a[:, p].copy()
                colq = a[:, r].copy()
                a[:, p] = c * colp - s * colq
                a[:, r] = s * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[r, :].copy()
                a[p, :] = c * rowp - s * rowq
                a[r, :] = s * rowp + c * rowq
                a[p, r] = 0.0
                a[r, p] = 0.0
                qp = q[:, p].copy()
                qq = q[:, r].copy()
                q[:, p] = c * qp - s * qq
                q[:, r] = s * qp + c * qq
    return np.diag(a).copy(), q, sweeps


def _inv_sqrt_gram(V):
    d = V.shape[1]
    m = V.T @ V
    # symmetrize exactly; V.T @ V can differ in the last bit across the diagonal
    m = 0.5 * (m + m.T)
    scale = max(1.0, float(np.max(np.abs(m))))
    w, q, _ = jacobi_eigh(m, 1e-14 * scale, 50)
    wmin = float(w.min())
    if wmin <= 0.0:
        return None, wmin
    r = np.zeros((d, d))
    for k in range(d):
        r += np.outer(q[:, k], q[:, k]) / math.sqrt(w[k])
    return r, wmin


def polar_isometry(V):
    """Return ``(W, wmin)`` with ``W = V (V^T V)^(-1/2)``.

    ``wmin`` is the smallest eigenvalue of ``V^T V``; when it is not positive
    ``W`` is ``None``.
    """
    V = np.ascontiguousarray(V, dtype=np.float64)
    r, wmin = _inv_sqrt_gram(V)
    if r is None:
        return None, wmin
    return V @ r, wmin


def defects(V):
    """Return ``(parseval_defect, uniformity_defect)`` of the rows of ``V``."""
    n, d = V.shape
    g = V.T @ V - np.eye(d)
    pd = math.sqrt(float(np.sum(g * g)))
    target = d / n
    ud = float(np.max(np.abs(np.sum(V * V, axis=1) - target)))
    return pd, ud


def project_uniform_parseval(V, tol, max_iter):
    """Alternate row rescaling and nearest-isometry projection.

    Returns ``(W, iterations, converged)``.  ``W`` is the last isometry
    produced; ``converged`` is true once both defects are at most ``tol``.
    """
    V = np.ascontiguousarray(V, dtype=np.float64)
    n, d = V.shape
    target = math.sqrt(d / n)
    w, wmin = polar_isometry(V)
    if w is None:
        return V.copy(), 0, False
    it = 0
    while True:
        pd, ud = defects(w)
        if pd <= tol and ud <= tol:
            return w, it, True
        if it >= max_iter:
            return w, it, False
        norms = np.sqrt(np.sum(w * w, axis=1))
        if np.any(norms == 0.0):
            return w, it, False
        scaled = w * (target / norms)[:, None]
        w2, wmin = polar_isometry(scaled)
        if w2 is None:
            return w, it, False
        w = w2
        it += 1


def _normalized_correlations(V):
    norms = np.sqrt(np.sum(V * V, axis=1))
    U = V / norms[:, None]
    return U, norms, U @ U.T


def smooth_coherence(V, p):
    """Scaled p-norm of the normalized off-diagonal correlations."""
    n = V.shape[0]
    if n < 2:
        return 0.0
    _, _, C = _normalized_correlations(np.ascontiguousarray(V, dtype=np.float64))
    iu = np.triu_indices(n, 1)
    a = np.abs(C[iu])
    m = float(a.max())
    if m == 0.0:
        return 0.0
    return m * float(np.sum((a / m) ** p)) ** (1.0 / p)


def smooth_coherence_grad(V, p):
    """Return ``(value, gradient)`` of :func:`smooth_coherence` in ``V``."""
    V = np.ascontiguousarray(V, dtype=np.float64)
    n, d = V.shape
    grad = np.zeros((n, d))
    if n < 2:
        return 0.0, grad
    U, norms, C = _normalized_correlations(V)
    np.fill_diagonal(C, 0.0)
    a = np.abs(C)
    m = float(a.max())
    if m == 0.0:
        return 0.0, grad
    r = a / m
    total = float(np.sum(np.triu(r, 1) ** p))
    value = m * total ** (1.0 / p)
    # d value / d c_kl = sign(c) (|c|/m)^(p-1) * total^(1/p - 1)
    w = np.sign(C) * r ** (p - 1) * total ** (1.0 / p - 1.0)
    # d c_kl / d f_k = (u_l - c_kl u_k) / |f_k|
    grad = (w @ U - np.sum(w * C, axis=1)[:, None] * U) / norms[:, None]
    return value, grad
