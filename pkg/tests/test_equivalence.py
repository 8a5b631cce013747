import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrframes import catalog
from corrframes.equivalence import (
    EQUIVALENT,
    INEQUIVALENT,
    UNKNOWN,
    brute_force_equivalent,
    compare_fingerprints,
    equivalent,
    fingerprint,
    type1_equivalent,
    verify_witness,
)
from corrframes.errors import InvalidInputError
from corrframes.frame import Frame, grammian
from corrframes.optimizer import random_uniform_parseval
from corrframes.transforms import (
    SignedPermutation,
    apply_signed_permutation,
    random_orthogonal,
    random_signed_permutation,
    rotate,
)


def planted(F, rng):
    s = random_signed_permutation(F.N, rng)
    return rotate(apply_signed_permutation(F, s), random_orthogonal(F.d, rng)), s


def test_type1_examples(rng):
    F = catalog.build("pentagon-complement5")
    assert type1_equivalent(F, F)
    assert type1_equivalent(F, rotate(F, random_orthogonal(3, rng)))
    swap = SignedPermutation((1, 0, 2, 3, 4), (1,) * 5)
    assert not type1_equivalent(F, apply_signed_permutation(F, swap))


def test_size_mismatch():
    with pytest.raises(InvalidInputError):
        equivalent(catalog.build("cube4"), catalog.build("icosahedron6"))


def test_fingerprint_examples():
    fp = fingerprint(np.eye(4))
    assert fp.eigenvalues == (1.0,) * 4
    assert set(fp.offdiag) == {0.0}
    fp = fingerprint(grammian(catalog.build("cube4")))
    assert fp.eigenvalues == (1.0, 1.0, 1.0, 0.0)
    assert fp.offdiag == (0.25,) * 12


def test_icosahedron_witness(rng):
    F = catalog.build("icosahedron6")
    G, s = planted(F, rng)
    v = equivalent(F, G)
    assert v.status == EQUIVALENT
    np.testing.assert_allclose(grammian(apply_signed_permutation(F, v.witness)), grammian(G), atol=1e-8)
    # the planted s is a witness too; the two differ by a Grammian automorphism
    assert verify_witness(grammian(F), grammian(G), s)


def test_cube_vs_non_uniform_parseval():
    # Every uniform Parseval (4,3)-frame is equiangular, so the distinct frame
    # is the complement of a non-uniform unit vector in R^4.
    u = np.array([0.1, 0.3, 0.5, np.sqrt(1 - 0.35)])
    Q = np.linalg.svd(np.eye(4) - np.outer(u, u))[0][:, :3]
    F = Frame(Q)
    v = equivalent(catalog.build("cube4"), F)
    assert v.status == INEQUIVALENT
    assert v.distinguishing_invariant == "off-diagonal multiset"


def test_self_equivalence():
    F = catalog.build("cube-plus-onb7")
    v = equivalent(F, F)
    assert v.status == EQUIVALENT
    assert v.witness == SignedPermutation.identity(7)


def test_budget_gives_unknown(rng):
    F = catalog.build("simplex:8")
    G, _ = planted(F, rng)
    v = equivalent(F, G, node_budget=3)
    assert v.status == UNKNOWN
    assert v.nodes_explored > 3


def graph_grammian_frames():
    # 2-regular graphs on 6 vertices: the hexagon and two triangles
    def gram(adj):
        return np.eye(6) + 0.2 * adj

    c6 = np.zeros((6, 6))
    for i in range(6):
        c6[i, (i + 1) % 6] = c6[(i + 1) % 6, i] = 1
    tri = np.zeros((6, 6))
    for block in ((0, 1, 2), (3, 4, 5)):
        for i in block:
            for j in block:
                if i != j:
                    tri[i, j] = 1
    return Frame(np.linalg.cholesky(gram(c6))), Frame(np.linalg.cholesky(gram(tri)))


def test_regular_graph_grammians():
    F, G = graph_grammian_frames()
    v = equivalent(F, G)
    assert v.status == INEQUIVALENT
    assert v.distinguishing_invariant == "eigenvalue multiset"
    assert brute_force_equivalent(F, G) is None


def test_search_proves_inequivalence(monkeypatch):
    # same row multisets, so only the search can tell them apart
    from corrframes import equivalence

    monkeypatch.setattr(equivalence, "compare_fingerprints", lambda a, b, atol: None)
    F, G = graph_grammian_frames()
    v = equivalence.equivalent(F, G)
    assert v.status == INEQUIVALENT
    assert v.distinguishing_invariant == "exhaustive signed-permutation search"
    assert v.nodes_explored > 0


def test_compare_fingerprints_tolerance():
    G = grammian(catalog.build("cube4"))
    a = fingerprint(G)
    b = fingerprint(G + 1e-11)
    assert compare_fingerprints(a, b) is None


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(3, 2), (4, 2), (5, 3), (6, 3), (6, 4)]), st.integers(0, 2**31))
def test_planted_pairs_agree_with_oracle(shape, seed):
    rng = np.random.default_rng(seed)
    F = random_uniform_parseval(*shape, seed=seed)
    G, _ = planted(F, rng)
    v = equivalent(F, G)
    assert v.status == EQUIVALENT
    assert brute_force_equivalent(F, G) is not None
    H = random_uniform_parseval(*shape, seed=seed + 1)
    assert (equivalent(F, H).status == EQUIVALENT) == (brute_force_equivalent(F, H) is not None)
