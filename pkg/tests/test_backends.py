"""The compiled kernels and the NumPy fallback must agree."""

import numpy as np
import pytest

from corrframes import _backend, _pykernels

pytestmark = pytest.mark.skipif(
    "cython" not in _backend.available_backends(), reason="compiled kernels not built"
)


def both(name, *args):
    with _backend.use_backend("python") as py:
        a = getattr(py, name)(*args)
    with _backend.use_backend("cython") as cy:
        b = getattr(cy, name)(*args)
    return a, b


def frame_matrix(seed, n=7, d=3):
    return np.random.default_rng(seed).standard_normal((n, d))


def test_selected_at_import():
    assert _backend.backend_name() == "cython"
    assert set(_backend.available_backends()) == {"cython", "python"}


def test_use_backend_restores():
    with _backend.use_backend("python"):
        assert _backend.kernels() is _pykernels
    assert _backend.backend_name() == "cython"


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.set_backend("fortran")


@pytest.mark.parametrize("seed", range(5))
def test_jacobi(seed):
    A = np.random.default_rng(seed).standard_normal((8, 8))
    A = A + A.T
    (wa, _, _), (wb, _, _) = both("jacobi_eigh", A, 1e-14 * np.abs(A).max(), 50)
    np.testing.assert_allclose(np.sort(wa), np.sort(wb), atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_polar_and_projection(seed):
    V = frame_matrix(seed)
    (Wa, ma), (Wb, mb) = both("polar_isometry", V)
    np.testing.assert_allclose(Wa, Wb, atol=1e-12)
    assert ma == pytest.approx(mb, rel=1e-12)
    (Pa, _, oka), (Pb, _, okb) = both("project_uniform_parseval", V, 1e-12, 500)
    assert oka and okb
    np.testing.assert_allclose(Pa, Pb, atol=1e-10)


@pytest.mark.parametrize("p", [2.0, 8.0, 1024.0])
def test_smooth_coherence(p):
    V = frame_matrix(3, 9, 4)
    a, b = both("smooth_coherence", V, p)
    assert a == pytest.approx(b, rel=1e-13)
    (va, ga), (vb, gb) = both("smooth_coherence_grad", V, p)
    assert va == pytest.approx(vb, rel=1e-13)
    np.testing.assert_allclose(ga, gb, rtol=1e-10, atol=1e-13)


def test_defects():
    V = frame_matrix(4)
    a, b = both("defects", V)
    np.testing.assert_allclose(a, b, rtol=1e-13)
