"""Multi-start search for correlation-minimizing uniform Parseval frames.

Each restart draws a random uniform Parseval frame and runs projected
gradient descent on the smoothed coherence

    s_p(F) = (sum_{k<l} |c_kl|^p)^(1/p),   c_kl = <f_k, f_l> / (|f_k| |f_l|)

for an increasing schedule of exponents p.  After every step the iterate is
pulled back onto the uniform Parseval set by alternating row rescaling and
nearest-isometry projection.  The reported coherence is always the exact
maximum correlation of the final frame, never the smoothed proxy.
"""

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _backend
from .catalog import known_coherence
from .errors import DegenerateInputError, InvalidInputError, OptimizerFailure
from .frame import Frame, max_correlation, welch_bound

MATCHES = "matches-known"
ABOVE = "above-known"
BELOW_ALERT = "below-known-ALERT"
NO_REFERENCE = "no-reference"

MATCH_TOL = 1e-3
BELOW_TOL = 1e-6
WELCH_SLACK = 1e-9

START_TOL = 1e-12
START_ACCEPT = 1e-9
MAX_ALTERNATIONS = 500
MAX_START_RETRIES = 10
MIN_STEP = 1e-12


def default_schedule():
    return tuple(2**k for k in range(1, 11))


@dataclass(frozen=True)
class OptimizerConfig:
    N: int
    d: int
    seed: int = 0
    restarts: int = 32
    p_schedule: tuple = field(default_factory=default_schedule)
    max_outer_iters: int = 200
    step_size: float = 0.1
    projection_tol: float = 1e-12
    stagnation_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "p_schedule", tuple(self.p_schedule))
        if not (self.N >= self.d >= 1):
            raise InvalidInputError(f"need N >= d >= 1, got N={self.N}, d={self.d}")
        if self.restarts < 1:
            raise InvalidInputError("restarts must be at least 1")
        ps = self.p_schedule
        if not ps or any(p < 2 for p in ps) or any(b <= a for a, b in zip(ps, ps[1:])):
            raise InvalidInputError("p_schedule must be strictly increasing with every p >= 2")
        if self.step_size <= 0 or self.max_outer_iters < 0:
            raise InvalidInputError("step_size must be positive and max_outer_iters non-negative")

    def digest(self):
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class OptimizerResult:
    config: OptimizerConfig
    best_frame: Frame
    achieved: float
    best_restart: int
    per_restart_best: tuple
    history: tuple
    certified: str
    reference: float | None
    welch: float


def restart_seeds(seed, restarts):
    """Independent integer seeds for each restart, split from ``seed``."""
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1))
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in ss.spawn(restarts)]


def random_uniform_parseval(N, d, seed):
    """Seeded random uniform Parseval (N, d)-frame.

    A Gaussian matrix is mapped to its nearest isometry and then alternately
    row-rescaled and re-orthonormalized until both defects fall below 1e-12.
    A start that does not get below 1e-9 within 500 alternations is redrawn
    with ``seed + 1`` (at most 10 times).
    """
    N, d = int(N), int(d)
    if not N >= d >= 1:
        raise InvalidInputError(f"need N >= d >= 1, got N={N}, d={d}")
    kern = _backend.kernels()
    for attempt in range(MAX_START_RETRIES + 1):
        rng = np.random.default_rng((int(seed) + attempt) % 2**64)
        W, _, ok = kern.project_uniform_parseval(rng.standard_normal((N, d)), START_TOL, MAX_ALTERNATIONS)
        if ok or max(kern.defects(W)) <= START_ACCEPT:
            return Frame(W)
    raise DegenerateInputError(f"could not reach a uniform Parseval ({N}, {d}) start from seed {seed}")


def smooth_coherence(F, p):
    V = F.V if isinstance(F, Frame) else np.asarray(F, dtype=np.float64)
    return float(_backend.kernels().smooth_coherence(np.ascontiguousarray(V), float(p)))


def smooth_coherence_grad(F, p):
    """``(value, gradient)``; gradient has the shape of the analysis matrix."""
    V = F.V if isinstance(F, Frame) else np.asarray(F, dtype=np.float64)
    value, grad = _backend.kernels().smooth_coherence_grad(np.ascontiguousarray(V), float(p))
    return float(value), grad


def _descend(V, config, kern):
    history = []
    tol = config.projection_tol
    for p in config.p_schedule:
        p = float(p)
        obj, grad = kern.smooth_coherence_grad(V, p)
        history.append((int(p), float(obj)))
        step = config.step_size
        for _ in range(config.max_outer_iters):
            accepted = False
            while step >= MIN_STEP:
                W, _, ok = kern.project_uniform_parseval(V - step * grad, tol, MAX_ALTERNATIONS)
                if ok:
                    new = kern.smooth_coherence(W, p)
                    if new < obj:
                        accepted = True
                        break
                step *= 0.5
            if not accepted:
                break
            decrease = obj - new
            V = W
            obj, grad = kern.smooth_coherence_grad(V, p)
            history.append((int(p), float(obj)))
            step = min(2.0 * step, config.step_size)
            if decrease < config.stagnation_tol:
                break
    return V, history


def _run_restart(config, seed):
    kern = _backend.kernels()
    start = random_uniform_parseval(config.N, config.d, seed)
    V = np.array(start.V)
    if config.N > config.d:
        V, history = _descend(V, config, kern)
    else:
        history = []
    F = Frame(V)
    return F, max_correlation(F), history


def certify_value(N, d, achieved):
    reference = known_coherence(N, d)
    if achieved < welch_bound(N, d) - WELCH_SLACK:
        return BELOW_ALERT
    if reference is None:
        return NO_REFERENCE
    delta = achieved - reference
    if delta < -BELOW_TOL:
        return BELOW_ALERT
    if abs(delta) <= MATCH_TOL:
        return MATCHES
    return ABOVE


def certify(result):
    """Compare the achieved coherence with the certified C(N, d)."""
    return certify_value(result.config.N, result.config.d, result.achieved)


def minimize(config):
    """Run every restart and keep the frame with the smallest exact coherence.

    Ties go to the lowest restart index.  The result depends only on the
    config (and on the active kernel backend's floating-point behaviour).
    """
    seeds = restart_seeds(config.seed, config.restarts)
    best = None
    per_restart = []
    for r, s in enumerate(seeds):
        try:
            F, achieved, history = _run_restart(config, s)
        except DegenerateInputError:
            per_restart.append(math.nan)
            continue
        per_restart.append(achieved)
        if best is None or achieved < best[1]:
            best = (F, achieved, history, r)
    if best is None:
        raise OptimizerFailure(f"all {config.restarts} restarts failed to reach the constraint set")
    F, achieved, history, r = best
    N, d = config.N, config.d
    return OptimizerResult(
        config=config,
        best_frame=F.with_label(f"optimizer:{config.digest()}"),
        achieved=achieved,
        best_restart=r,
        per_restart_best=tuple(per_restart),
        history=tuple(history),
        certified=certify_value(N, d, achieved),
        reference=known_coherence(N, d),
        welch=welch_bound(N, d),
    )
