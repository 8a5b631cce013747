"""Frame data model and scalar metrics.

A frame is an ordered family of N nonzero vectors in R^d stored as the rows
of an N x d array (the analysis matrix ``V``).  The metrics here are the
quantities used throughout the package: Grammian, Parseval and uniformity
defects, maximum correlation (coherence), the Welch bound, equiangularity,
reconstruction error and tightness diagnostics.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .numerics import sym_eig

DEFAULT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Frame:
    """N labelled vectors in R^d.  The coordinate array is read-only."""

    vectors: np.ndarray
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.float64, copy=True)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise InvalidInputError(f"frame vectors must form an N x d array, got shape {v.shape}")
        n, d = v.shape
        if n < d:
            raise InvalidInputError(f"a frame needs N >= d, got N={n}, d={d}")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("frame coordinates must be finite")
        zero = np.flatnonzero(~np.any(v != 0.0, axis=1))
        if zero.size:
            raise InvalidInputError(f"frame vector {int(zero[0])} is zero")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def N(self):
        return self.vectors.shape[0]

    @property
    def d(self):
        return self.vectors.shape[1]

    @property
    def V(self):
        """Analysis matrix (rows are the frame vectors)."""
        return self.vectors

    def __len__(self):
        return self.N

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.vectors.shape == other.vectors.shape and bool(
            np.array_equal(self.vectors, other.vectors)
        )

    __hash__ = None

    def with_label(self, label):
        return Frame(self.vectors, label=label)

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<Frame{tag} N={self.N} d={self.d}>"


def as_frame(F):
    return F if isinstance(F, Frame) else Frame(F)


@dataclass(frozen=True)
class TightnessDiagnostics:
    column_norms_sq: tuple
    max_column_inner: float
    is_tight: bool


@dataclass(frozen=True)
class FrameReport:
    N: int
    d: int
    parseval_defect: float
    uniformity_defect: float
    tight_constant_A: float
    max_correlation: float
    min_angle_deg: float
    min_angle_rad: float
    welch: float
    equiangular: bool
    redundancy: float


def grammian(F):
    """N x N matrix of inner products, entry (i, j) = <f_j, f_i>."""
    V = as_frame(F).V
    return V @ V.T


def parseval_defect(F):
    """Frobenius norm of ``V^T V - I_d``; zero exactly for Parseval frames."""
    V = as_frame(F).V
    S = V.T @ V - np.eye(V.shape[1])
    return float(np.linalg.norm(S, "fro"))


def uniformity_defect(F):
    """Largest deviation of a squared vector norm from d/N."""
    F = as_frame(F)
    sq = np.sum(F.V * F.V, axis=1)
    return float(np.max(np.abs(sq - F.d / F.N)))


def normalized_correlations(F):
    """Cosines between all pairs of frame vectors (N x N, unit diagonal)."""
    V = as_frame(F).V
    U = V / np.linalg.norm(V, axis=1)[:, None]
    return U @ U.T


def _offdiag_abs(C):
    n = C.shape[0]
    return np.abs(C[~np.eye(n, dtype=bool)])


def max_correlation(F):
    """Maximum absolute cosine between distinct frame vectors, in [0, 1].

    A single vector has no pairs; its maximum correlation is taken as 0.
    """
    F = as_frame(F)
    if F.N < 2:
        return 0.0
    if uniformity_defect(F) <= 1e-12:
        # fast path: all norms are sqrt(d/N) up to rounding
        G = grammian(F)
        m = (F.N / F.d) * float(np.max(_offdiag_abs(G)))
    else:
        m = float(np.max(_offdiag_abs(normalized_correlations(F))))
    return min(1.0, max(0.0, m))


def welch_bound(N, d):
    """Lower bound sqrt((N-d)/(d(N-1))) on the coherence of (N, d)-frames."""
    N, d = int(N), int(d)
    if d < 1 or N < d:
        raise InvalidInputError(f"welch_bound needs N >= d >= 1, got N={N}, d={d}")
    if N == d:
        return 0.0
    return math.sqrt((N - d) / (d * (N - 1)))


def is_equiangular(F, tol=DEFAULT_TOL):
    """True when every pairwise |cosine| lies within ``tol`` of their mean."""
    F = as_frame(F)
    if F.N < 2:
        return True
    vals = _offdiag_abs(normalized_correlations(F))
    return bool(np.max(np.abs(vals - vals.mean())) <= tol)


def reconstruction_error(F, h):
    """Norm of ``h - sum_i <h, f_i> f_i``."""
    F = as_frame(F)
    h = np.asarray(h, dtype=np.float64).ravel()
    if h.shape[0] != F.d:
        raise InvalidInputError(f"vector has dimension {h.shape[0]}, frame has d={F.d}")
    coeffs = F.V @ h
    return float(np.linalg.norm(h - F.V.T @ coeffs))


def tightness_diagnostics(F, tol=DEFAULT_TOL):
    """Column-wise view of ``V``: a frame is tight iff the columns are
    orthogonal and of equal norm.  Both checks are made relative to the mean
    squared column norm.
    """
    F = as_frame(F)
    S = F.V.T @ F.V
    norms = np.diag(S).copy()
    off = S - np.diag(norms)
    max_inner = float(np.max(np.abs(off))) if F.d > 1 else 0.0
    scale = float(norms.mean())
    spread = float(norms.max() - norms.min())
    tight = spread <= tol * scale and max_inner <= tol * scale
    return TightnessDiagnostics(
        column_norms_sq=tuple(float(x) for x in norms),
        max_column_inner=max_inner,
        is_tight=bool(tight),
    )


def grammian_spectrum(F):
    """Eigenvalues of the Grammian, descending."""
    return sym_eig(grammian(F)).eigenvalues


def analyze(F, tol=DEFAULT_TOL):
    F = as_frame(F)
    mc = max_correlation(F)
    angle = math.acos(mc)
    S = F.V.T @ F.V
    return FrameReport(
        N=F.N,
        d=F.d,
        parseval_defect=parseval_defect(F),
        uniformity_defect=uniformity_defect(F),
        tight_constant_A=float(np.trace(S)) / F.d,
        max_correlation=mc,
        min_angle_deg=math.degrees(angle),
        min_angle_rad=angle,
        welch=welch_bound(F.N, F.d),
        equiangular=is_equiangular(F, tol),
        redundancy=F.N / F.d,
    )
