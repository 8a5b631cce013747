"""Frame equivalence through Grammian conjugation.

Two frames with the same Grammian are related by an orthogonal map (type-I
equivalence).  Frames are equivalent in the full sense when their Grammians
are conjugate under a signed permutation ``D P``.  ``equivalent`` searches
for such a signed permutation by backtracking, pruned by conjugation
invariants (``GrammianFingerprint``).  ``brute_force_equivalent`` enumerates
all ``2^N N!`` candidates and is only meant as a test oracle for small N.

The Grammian test does not require Parseval inputs, so both functions accept
any pair of frames with matching (N, d).
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .frame import as_frame, grammian
from .numerics import sym_eig
from .transforms import SignedPermutation

DEFAULT_TOL = 1e-8
DEFAULT_NODE_BUDGET = 10**7
FINGERPRINT_DECIMALS = 10

EQUIVALENT = "equivalent"
INEQUIVALENT = "inequivalent"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class GrammianFingerprint:
    """Conjugation invariants of a Grammian, rounded to 10 decimals."""

    eigenvalues: tuple
    diagonal: tuple
    offdiag: tuple
    rows: tuple


@dataclass(frozen=True)
class EquivalenceVerdict:
    status: str
    witness: SignedPermutation | None = None
    distinguishing_invariant: str | None = None
    nodes_explored: int = 0


def _check_pair(F, G):
    F, G = as_frame(F), as_frame(G)
    if (F.N, F.d) != (G.N, G.d):
        raise InvalidInputError(f"frames differ in size: ({F.N}, {F.d}) vs ({G.N}, {G.d})")
    return F, G


def type1_equivalent(F, G, tol=DEFAULT_TOL):
    """True when the two Grammians agree entrywise within ``tol``."""
    F, G = _check_pair(F, G)
    return bool(np.max(np.abs(grammian(F) - grammian(G))) <= tol)


def _row_signatures(G):
    A = np.abs(np.asarray(G, dtype=np.float64))
    n = A.shape[0]
    mask = ~np.eye(n, dtype=bool)
    return np.sort(A[mask].reshape(n, n - 1), axis=1) if n > 1 else np.zeros((n, 0))


def fingerprint(G, decimals=FINGERPRINT_DECIMALS):
    G = np.asarray(G, dtype=np.float64)
    n = G.shape[0]
    eig = sym_eig(G).eigenvalues
    mask = ~np.eye(n, dtype=bool)
    rows = sorted(tuple(np.round(r, decimals).tolist()) for r in _row_signatures(G))
    return GrammianFingerprint(
        eigenvalues=tuple(np.round(eig, decimals).tolist()),
        diagonal=tuple(np.round(np.sort(np.diag(G)), decimals).tolist()),
        offdiag=tuple(np.round(np.sort(np.abs(G[mask])), decimals).tolist()),
        rows=tuple(rows),
    )


def _close(a, b, atol):
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


def _rows_match(ra, rb, atol):
    # multiset matching with tolerance; greedy is exact once values are
    # separated by more than 2 * atol
    remaining = [np.asarray(r) for r in rb]
    for r in ra:
        r = np.asarray(r)
        for k, cand in enumerate(remaining):
            if _close(r, cand, atol):
                del remaining[k]
                break
        else:
            return False
    return not remaining


def compare_fingerprints(a, b, atol=1e-9, eig_atol=None):
    """Name of the first fingerprint component that differs, else ``None``.

    Entrywise perturbations of size ``atol`` can move eigenvalues by up to
    ``N * atol``, hence the separate ``eig_atol``.
    """
    if eig_atol is None:
        eig_atol = atol * max(1, len(a.eigenvalues))
    if not _close(a.eigenvalues, b.eigenvalues, eig_atol):
        return "eigenvalue multiset"
    if not _close(a.offdiag, b.offdiag, atol):
        return "off-diagonal multiset"
    if not _close(a.diagonal, b.diagonal, atol):
        return "diagonal multiset"
    if not _rows_match(a.rows, b.rows, atol):
        return "per-row off-diagonal multisets"
    return None


def _bfs_order(G, tol):
    """Vertex order in which each non-root vertex has an earlier neighbour."""
    n = G.shape[0]
    adj = np.abs(G) > tol
    np.fill_diagonal(adj, False)
    order, parent = [], [None] * n
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in np.flatnonzero(adj[v]):
                w = int(w)
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    queue.append(w)
    return order, parent


class _BudgetExceeded(Exception):
    pass


def _search(G1, G2, tol, budget):
    """Find (perm, signs) with ``s_i s_j G1[perm i, perm j] = G2[i, j]``."""
    n = G1.shape[0]
    order, parent = _bfs_order(G2, tol)
    sig_atol = max(tol, 1e-12)
    sig1, sig2 = _row_signatures(G1), _row_signatures(G2)
    d1, d2 = np.diag(G1), np.diag(G2)
    candidates = []
    for i in range(n):
        ok = np.all(np.abs(sig1 - sig2[i]) <= sig_atol, axis=1) & (np.abs(d1 - d2[i]) <= tol)
        candidates.append([int(k) for k in np.flatnonzero(ok)])

    perm = [-1] * n
    signs = np.zeros(n)
    used = [False] * n
    placed = []
    nodes = 0

    def place(pos):
        nonlocal nodes
        if pos == n:
            return True
        i = order[pos]
        idx = np.array(placed, dtype=int)
        target = G2[i, idx]
        pj = np.array([perm[j] for j in placed], dtype=int)
        for k in candidates[i]:
            if used[k]:
                continue
            nodes += 1
            if nodes > budget:
                raise _BudgetExceeded
            s = 1.0
            j = parent[i]
            if j is not None and G2[i, j] * signs[j] * G1[k, perm[j]] < 0:
                s = -1.0
            if idx.size and np.any(np.abs(s * signs[idx] * G1[k, pj] - target) > tol):
                continue
            perm[i], signs[i], used[k] = k, s, True
            placed.append(i)
            if place(pos + 1):
                return True
            placed.pop()
            perm[i], signs[i], used[k] = -1, 0.0, False
        return False

    try:
        found = place(0)
    except _BudgetExceeded:
        return None, nodes, True
    if not found:
        return None, nodes, False
    return SignedPermutation(tuple(perm), tuple(int(s) for s in signs)), nodes, False


def verify_witness(G1, G2, witness, tol=DEFAULT_TOL):
    return bool(np.max(np.abs(witness.conjugate(G1) - G2)) <= tol)


def equivalent(F, G, tol=DEFAULT_TOL, node_budget=DEFAULT_NODE_BUDGET):
    """Decide whether ``G`` is a rotated, permuted, sign-flipped copy of ``F``.

    On success the witness ``s`` satisfies
    ``grammian(apply_signed_permutation(F, s)) == grammian(G)`` within ``tol``.
    """
    F, G = _check_pair(F, G)
    G1, G2 = grammian(F), grammian(G)
    diff = compare_fingerprints(fingerprint(G1), fingerprint(G2), atol=max(tol, 1e-9))
    if diff is not None:
        return EquivalenceVerdict(INEQUIVALENT, distinguishing_invariant=diff)
    witness, nodes, exhausted_budget = _search(G1, G2, tol, node_budget)
    if exhausted_budget:
        return EquivalenceVerdict(UNKNOWN, nodes_explored=nodes)
    if witness is None:
        return EquivalenceVerdict(
            INEQUIVALENT,
            distinguishing_invariant="exhaustive signed-permutation search",
            nodes_explored=nodes,
        )
    if not verify_witness(G1, G2, witness, tol):
        raise RuntimeError("equivalence search returned a witness that does not verify")
    return EquivalenceVerdict(EQUIVALENT, witness=witness, nodes_explored=nodes)


def brute_force_equivalent(F, G, tol=DEFAULT_TOL):
    """Oracle: try every signed permutation.  Returns a witness or ``None``."""
    F, G = _check_pair(F, G)
    G1, G2 = grammian(F), grammian(G)
    n = F.N
    S = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    outer = S[:, :, None] * S[:, None, :]
    for perm in itertools.permutations(range(n)):
        P = G1[np.ix_(perm, perm)]
        err = np.max(np.abs(outer * P - G2), axis=(1, 2))
        hit = np.flatnonzero(err <= tol)
        if hit.size:
            return SignedPermutation(perm, tuple(int(x) for x in S[hit[0]]))
    return None
