import math

import numpy as np
import pytest

from corrframes import _backend, catalog
from corrframes.errors import InvalidInputError
from corrframes.frame import Frame, max_correlation, parseval_defect, uniformity_defect, welch_bound
from corrframes.optimizer import (
    ABOVE,
    BELOW_ALERT,
    MATCHES,
    NO_REFERENCE,
    OptimizerConfig,
    certify,
    certify_value,
    minimize,
    random_uniform_parseval,
    restart_seeds,
    smooth_coherence,
    smooth_coherence_grad,
)


def test_config_validation():
    for kwargs in (
        dict(N=2, d=3),
        dict(N=4, d=3, restarts=0),
        dict(N=4, d=3, p_schedule=(4, 2)),
        dict(N=4, d=3, p_schedule=(1, 2)),
        dict(N=4, d=3, step_size=0),
    ):
        with pytest.raises(InvalidInputError):
            OptimizerConfig(**kwargs)


def test_digest_tracks_config():
    a = OptimizerConfig(5, 3, seed=1)
    assert a.digest() == OptimizerConfig(5, 3, seed=1, p_schedule=[2, 4, 8, 16, 32, 64, 128, 256, 512, 1024]).digest()
    assert a.digest() != OptimizerConfig(5, 3, seed=2).digest()


def test_restart_seeds_are_distinct_and_stable():
    s = restart_seeds(0, 32)
    assert len(set(s)) == 32
    assert s == restart_seeds(0, 32)
    assert restart_seeds(0, 4) == s[:4]


@pytest.mark.parametrize("d", [1, 3, 5])
def test_random_start_square_is_onb(d):
    F = random_uniform_parseval(d, d, seed=3)
    np.testing.assert_allclose(F.V @ F.V.T, np.eye(d), atol=1e-12)


def test_random_start_properties():
    F = random_uniform_parseval(4, 3, seed=1)
    assert parseval_defect(F) <= 1e-9 and uniformity_defect(F) <= 1e-9
    F = random_uniform_parseval(5, 2, seed=7)
    assert max_correlation(F) >= math.cos(math.pi / 5) - 1e-9


def test_smooth_coherence_examples():
    assert smooth_coherence(Frame(np.eye(3)), 8) == 0
    cube = catalog.build("cube4")
    # six unordered pairs, each with |c| = 1/3
    assert smooth_coherence(cube, 1024) == pytest.approx(6 ** (1 / 1024) / 3, rel=1e-14)
    assert smooth_coherence(cube, 1024) == pytest.approx(12 ** (1 / 1024) / 3, abs=1e-3)
    assert smooth_coherence(cube, 2) == pytest.approx(math.sqrt(6) / 3, rel=1e-14)


def test_smooth_coherence_brute_force(rng, backend):
    V = rng.standard_normal((7, 3))
    U = V / np.linalg.norm(V, axis=1, keepdims=True)
    c = np.abs((U @ U.T)[np.triu_indices(7, 1)])
    for p in (2, 16, 512):
        assert smooth_coherence(V, p) == pytest.approx(np.sum(c**p) ** (1 / p), rel=1e-12)


def test_gradient_finite_difference(backend):
    V = np.random.default_rng(42).standard_normal((6, 3))
    h = 1e-6
    _, g = smooth_coherence_grad(V, 8)
    fd = np.zeros_like(V)
    for idx in np.ndindex(*V.shape):
        Vp, Vm = V.copy(), V.copy()
        Vp[idx] += h
        Vm[idx] -= h
        fd[idx] = (smooth_coherence(Vp, 8) - smooth_coherence(Vm, 8)) / (2 * h)
    assert np.linalg.norm(fd - g) <= 1e-6 * np.linalg.norm(g)


def test_gradient_large_p_is_finite():
    V = np.random.default_rng(1).standard_normal((8, 3))
    value, g = smooth_coherence_grad(V, 1024)
    assert np.isfinite(value) and np.all(np.isfinite(g))


def test_certify_cases():
    assert certify_value(5, 3, 0.5394) == MATCHES
    assert certify_value(7, 3, 0.60) == ABOVE
    assert certify_value(4, 3, 0.30) == BELOW_ALERT
    assert certify_value(5, 2, 0.7) == BELOW_ALERT  # above Welch, below certified value
    assert certify_value(9, 4, 0.5) == NO_REFERENCE


def test_minimize_43():
    res = minimize(OptimizerConfig(4, 3, restarts=32))
    assert 1 / 3 - 1e-9 <= res.achieved <= 1 / 3 + 1e-3
    assert res.certified == MATCHES == certify(res)
    assert res.achieved == max_correlation(res.best_frame)
    assert res.per_restart_best[res.best_restart] == res.achieved
    assert res.best_frame.label.startswith("optimizer:")


def test_minimize_63():
    res = minimize(OptimizerConfig(6, 3, seed=3))
    assert res.achieved == pytest.approx(1 / math.sqrt(5), abs=1e-3)
    assert parseval_defect(res.best_frame) <= 1e-10


def test_minimize_square():
    res = minimize(OptimizerConfig(3, 3, seed=1))
    assert res.achieved <= 1e-6
    assert res.certified == MATCHES


def test_minimize_is_deterministic():
    cfg = OptimizerConfig(5, 3, seed=11, restarts=3)
    a, b = minimize(cfg), minimize(cfg)
    assert a.best_frame == b.best_frame
    assert a.history == b.history
    assert a.per_restart_best == b.per_restart_best


def test_history_is_monotone_per_stage():
    res = minimize(OptimizerConfig(5, 2, seed=4, restarts=1))
    for (p0, v0), (p1, v1) in zip(res.history, res.history[1:]):
        if p0 == p1:
            assert v1 < v0


def test_uncatalogued_shape_properties():
    res = minimize(OptimizerConfig(9, 4, seed=2, restarts=4))
    assert res.certified == NO_REFERENCE
    assert res.reference is None
    assert res.achieved >= welch_bound(9, 4) - 1e-9
    assert parseval_defect(res.best_frame) <= 1e-10
    assert uniformity_defect(res.best_frame) <= 1e-10


@pytest.mark.slow
def test_python_backend_reaches_known_value():
    with _backend.use_backend("python"):
        res = minimize(OptimizerConfig(5, 2, seed=1, restarts=4))
    assert res.certified == MATCHES
