"""Frame-to-frame constructions and the group actions behind equivalence."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .frame import Frame, as_frame, grammian, parseval_defect, uniformity_defect
from .numerics import sym_eig

PARSEVAL_TOL = 1e-8


@dataclass(frozen=True)
class SignedPermutation:
    """Vector ``i`` of the image is ``signs[i] * f[perm[i]]`` (0-based)."""

    perm: tuple
    signs: tuple

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        signs = tuple(int(s) for s in self.signs)
        if sorted(perm) != list(range(len(perm))):
            raise InvalidInputError(f"perm is not a bijection on 0..{len(perm) - 1}")
        if len(signs) != len(perm):
            raise InvalidInputError("perm and signs differ in length")
        if any(s not in (-1, 1) for s in signs):
            raise InvalidInputError("signs must be +1 or -1")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), (1,) * n)

    @property
    def size(self):
        return len(self.perm)

    def matrix(self):
        """The N x N matrix ``D P`` with ``(D P) V`` the permuted analysis matrix."""
        n = self.size
        M = np.zeros((n, n))
        M[np.arange(n), list(self.perm)] = self.signs
        return M

    def conjugate(self, G):
        """``G'[i, j] = s_i s_j G[perm i, perm j]``."""
        p = list(self.perm)
        s = np.asarray(self.signs, dtype=np.float64)
        return np.asarray(G)[np.ix_(p, p)] * np.outer(s, s)

    def compose(self, other):
        """Signed permutation equal to applying ``other`` and then ``self``."""
        perm = tuple(other.perm[p] for p in self.perm)
        signs = tuple(s * other.signs[p] for s, p in zip(self.signs, self.perm))
        return SignedPermutation(perm, signs)

    def inverse(self):
        n = self.size
        perm = [0] * n
        signs = [1] * n
        for i, p in enumerate(self.perm):
            perm[p] = i
            signs[p] = self.signs[i]
        return SignedPermutation(tuple(perm), tuple(signs))


def _require_uniform_parseval(F, what):
    pd = parseval_defect(F)
    ud = uniformity_defect(F)
    if pd > PARSEVAL_TOL or ud > PARSEVAL_TOL:
        raise InvalidInputError(
            f"{what} must be a uniform Parseval frame "
            f"(parseval defect {pd:.3g}, uniformity defect {ud:.3g})"
        )


def complement(F):
    """Uniform Parseval (N, N-d)-frame whose Grammian is ``I_N - G``.

    The representative is fixed by the sign-normalized eigenvectors of
    ``I - G`` with eigenvalue >= 1/2, taken in descending eigenvalue order.
    """
    F = as_frame(F)
    if F.N == F.d:
        raise InvalidInputError("an (N, N)-frame has no complement (it would be empty)")
    _require_uniform_parseval(F, "complement input")
    P = np.eye(F.N) - grammian(F)
    eig = sym_eig(P)
    keep = eig.eigenvalues >= 0.5
    k = int(np.count_nonzero(keep))
    if k != F.N - F.d:
        raise InvalidInputError(
            f"I - G has {k} eigenvalues near 1, expected {F.N - F.d}; input is not Parseval"
        )
    return Frame(eig.eigenvectors[:, keep])


def union(F, G):
    """Rescaled union ``{a f_i} + {b g_j}`` with a^2 = N/(N+M), b^2 = M/(N+M)."""
    F, G = as_frame(F), as_frame(G)
    if F.d != G.d:
        raise InvalidInputError(f"union needs equal dimensions, got {F.d} and {G.d}")
    _require_uniform_parseval(F, "first union input")
    _require_uniform_parseval(G, "second union input")
    n, m = F.N, G.N
    a = math.sqrt(n / (n + m))
    b = math.sqrt(m / (n + m))
    return Frame(np.vstack([a * F.V, b * G.V]))


def scale_to_parseval(F, tol=PARSEVAL_TOL):
    """Divide a tight frame with bound A by sqrt(A)."""
    F = as_frame(F)
    S = F.V.T @ F.V
    A = float(np.trace(S)) / F.d
    if A <= 0 or float(np.max(np.abs(S - A * np.eye(F.d)))) > tol * max(1.0, A):
        raise InvalidInputError("frame is not tight within tolerance")
    return Frame(F.V / math.sqrt(A), label=F.label)


def apply_signed_permutation(F, s):
    F = as_frame(F)
    if s.size != F.N:
        raise InvalidInputError(f"signed permutation has size {s.size}, frame has N={F.N}")
    signs = np.asarray(s.signs, dtype=np.float64)[:, None]
    return Frame(signs * F.V[list(s.perm)])


def rotate(F, U, tol=1e-10):
    """Apply an orthogonal d x d matrix to every frame vector."""
    F = as_frame(F)
    U = np.asarray(U, dtype=np.float64)
    if U.shape != (F.d, F.d):
        raise InvalidInputError(f"rotation must be {F.d}x{F.d}, got {U.shape}")
    if float(np.max(np.abs(U.T @ U - np.eye(F.d)))) > tol:
        raise InvalidInputError("matrix is not orthogonal")
    return Frame(F.V @ U.T)


def random_orthogonal(d, rng):
    """Haar-distributed orthogonal matrix (QR of a Gaussian, sign-fixed)."""
    Z = rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    return Q * np.sign(np.diag(R))


def random_signed_permutation(n, rng):
    perm = tuple(int(p) for p in rng.permutation(n))
    signs = tuple(int(x) for x in rng.choice([-1, 1], size=n))
    return SignedPermutation(perm, signs)
