# cython: language_level=3
"""Compiled hot kernels.  Same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, pow

cnp.import_array()

NAME = "cython"


cdef int _jacobi(double[:, ::1] a, double[:, ::1] q, double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, p, r
    cdef double off, v, apq, theta, t, c, s, x, y
    cdef int sweeps = 0
    for i in range(n):
        for j in range(n):
            q[i, j] = 1.0 if i == j else 0.0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                v = fabs(a[i, j])
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
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    x = a[k, p]
                    y = a[k, r]
                    a[k, p] = c * x - s * y
                    a[k, r] = s * x + c * y
                for k in range(n):
                    x = a[p, k]
                    y = a[r, k]
                    a[p, k] = c * x - s * y
                    a[r, k] = s * x + c * y
                a[p, r] = 0.0
                a[r, p] = 0.0
                for k in range(n):
                    x = q[k, p]
                    y = q[k, r]
                    q[k, p] = c * x - s * y
                    q[k, r] = s * x + c * y
    return sweeps


def jacobi_eigh(A, double tol, int max_sweeps):
    cdef cnp.ndarray[double, ndim=2, mode="c"] a = np.array(A, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    q = np.empty((n, n), dtype=np.float64)
    cdef int sweeps = _jacobi(a, q, tol, max_sweeps)
    return np.diag(a).copy(), q, sweeps


cdef double _polar(double[:, ::1] v, double[:, ::1] out,
                   double[:, ::1] m, double[:, ::1] q, double[:, ::1] r) noexcept nogil:
    """out = v (v^T v)^(-1/2); returns the smallest eigenvalue of v^T v."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t d = v.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc, scale, wmin, wk
    scale = 1.0
    for i in range(d):
        for j in range(i, d):
            acc = 0.0
            for k in range(n):
                acc += v[k, i] * v[k, j]
            m[i, j] = acc
            m[j, i] = acc
            if fabs(acc) > scale:
                scale = fabs(acc)
    _jacobi(m, q, 1e-14 * scale, 50)
    wmin = m[0, 0]
    for k in range(1, d):
        if m[k, k] < wmin:
            wmin = m[k, k]
    if wmin <= 0.0:
        return wmin
    for i in range(d):
        for j in range(d):
            r[i, j] = 0.0
    for k in range(d):
        wk = 1.0 / sqrt(m[k, k])
        for i in range(d):
            for j in range(d):
                r[i, j] += q[i, k] * q[j, k] * wk
    for i in range(n):
        for j in range(d):
            acc = 0.0
            for k in range(d):
                acc += v[i, k] * r[k, j]
            out[i, j] = acc
    return wmin


def polar_isometry(V):
    cdef cnp.ndarray[double, ndim=2, mode="c"] v = np.ascontiguousarray(V, dtype=np.float64)
    cdef Py_ssize_t d = v.shape[1]
    out = np.empty_like(v)
    m = np.empty((d, d))
    q = np.empty((d, d))
    r = np.empty((d, d))
    cdef double wmin = _polar(v, out, m, q, r)
    if wmin <= 0.0:
        return None, wmin
    return out, wmin


cdef void _defects(double[:, ::1] v, double* pd, double* ud) noexcept nogil:
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t d = v.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc, fro = 0.0, worst = 0.0, target = <double>d / <double>n
    for i in range(d):
        for j in range(d):
            acc = 0.0
            for k in range(n):
                acc += v[k, i] * v[k, j]
            if i == j:
                acc -= 1.0
            fro += acc * acc
    for k in range(n):
        acc = 0.0
        for j in range(d):
            acc += v[k, j] * v[k, j]
        acc = fabs(acc - target)
        if acc > worst:
            worst = acc
    pd[0] = sqrt(fro)
    ud[0] = worst


def defects(V):
    cdef cnp.ndarray[double, ndim=2, mode="c"] v = np.ascontiguousarray(V, dtype=np.float64)
    cdef double pd, ud
    _defects(v, &pd, &ud)
    return pd, ud


def project_uniform_parseval(V, double tol, int max_iter):
    cdef cnp.ndarray[double, ndim=2, mode="c"] v = np.array(V, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t d = v.shape[1]
    w_arr = np.empty((n, d))
    cdef double[:, ::1] w = w_arr
    cdef double[:, ::1] vv = v
    cdef double[:, ::1] m = np.empty((d, d))
    cdef double[:, ::1] q = np.empty((d, d))
    cdef double[:, ::1] r = np.empty((d, d))
    cdef double target = sqrt(<double>d / <double>n)
    cdef double pd, ud, nrm, wmin
    cdef Py_ssize_t i, j
    cdef int it = 0
    cdef bint ok = False
    with nogil:
        wmin = _polar(vv, w, m, q, r)
        if wmin > 0.0:
            while True:
                _defects(w, &pd, &ud)
                if pd <= tol and ud <= tol:
                    ok = True
                    break
                if it >= max_iter:
                    break
                wmin = 1.0
                for i in range(n):
                    nrm = 0.0
                    for j in range(d):
                        nrm += w[i, j] * w[i, j]
                    nrm = sqrt(nrm)
                    if nrm == 0.0:
                        wmin = 0.0
                        break
                    for j in range(d):
                        vv[i, j] = w[i, j] * (target / nrm)
                if wmin == 0.0:
                    break
                wmin = _polar(vv, w, m, q, r)
                if wmin <= 0.0:
                    break
                it += 1
    if wmin <= 0.0 and it == 0 and not ok:
        return np.array(V, dtype=np.float64, order="C", copy=True), 0, False
    return w_arr, it, ok


def smooth_coherence(V, double p):
    value, _ = _smooth(V, p, False)
    return value


def smooth_coherence_grad(V, double p):
    return _smooth(V, p, True)


cdef tuple _smooth(object V, double p, bint want_grad):
    cdef cnp.ndarray[double, ndim=2, mode="c"] v = np.ascontiguousarray(V, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t d = v.shape[1]
    grad_arr = np.zeros((n, d))
    if n < 2:
        return 0.0, grad_arr
    cdef double[:, ::1] g = grad_arr
    cdef double[:, ::1] u = np.empty((n, d))
    cdef double[:, ::1] c = np.zeros((n, n))
    cdef double[::1] norms = np.empty(n)
    cdef Py_ssize_t i, j, k
    cdef double acc, mx = 0.0, total = 0.0, value, coef, wkl, ckl, ratio
    with nogil:
        for i in range(n):
            acc = 0.0
            for k in range(d):
                acc += v[i, k] * v[i, k]
            norms[i] = sqrt(acc)
            for k in range(d):
                u[i, k] = v[i, k] / norms[i]
        for i in range(n):
            for j in range(i + 1, n):
                acc = 0.0
                for k in range(d):
                    acc += u[i, k] * u[j, k]
                c[i, j] = acc
                c[j, i] = acc
                if fabs(acc) > mx:
                    mx = fabs(acc)
    if mx == 0.0:
        return 0.0, grad_arr
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                total += pow(fabs(c[i, j]) / mx, p)
        value = mx * pow(total, 1.0 / p)
        if want_grad:
            coef = pow(total, 1.0 / p - 1.0)
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    ckl = c[i, j]
                    if ckl == 0.0:
                        continue
                    ratio = pow(fabs(ckl) / mx, p - 1.0) * coef
                    wkl = ratio if ckl > 0.0 else -ratio
                    for k in range(d):
                        g[i, k] += wkl * (u[j, k] - ckl * u[i, k])
                for k in range(d):
                    g[i, k] /= norms[i]
    return value, grad_arr
