import itertools
from collections import Counter

import numpy as np
import pytest

from bilmetric.bilform import GraphSpec, distance, rank_table, subspace_of
from bilmetric.gf import make_field
from bilmetric.linalg import LinalgError, Subspace, rank
from bilmetric.resolving import (
    LandmarkSet,
    build_landmarks,
    find_separating_landmark,
    first_collision,
    hyperplanes_avoiding,
    signature,
    theorem_size,
    verify_resolving,
)

F2 = make_field(2)

SPECS = [(2, 4, 2), (2, 5, 2), (2, 2, 2), (2, 3, 2), (2, 3, 3), (2, 4, 3), (3, 2, 2), (3, 3, 2), (4, 2, 2)]


@pytest.fixture(scope="module")
def built():
    cache = {}

    def get(q, n, d):
        if (q, n, d) not in cache:
            cache[q, n, d] = build_landmarks(GraphSpec.of(q, n, d))
        return cache[q, n, d]

    return get


@pytest.mark.parametrize("q,n,d", SPECS)
def test_landmark_invariants(built, q, n, d):
    M, ctx = built(q, n, d)
    g = ctx.graph
    assert len(M) == (q ** (n + d - 1) if n >= d + 2 else q ** (n + d)) == theorem_size(g)
    assert ctx.case_tag == (1 if n >= d + 2 else 2)
    assert len(set(M.indices)) == len(M)
    assert ctx.N == g.N
    per_block = Counter(b for b, _ in M.provenance)
    assert set(per_block.values()) == {q**d}
    for U_mat, (bi, _) in zip(M.matrices, M.provenance):
        U = subspace_of(g, U_mat)
        block = ctx.blocks[bi]
        assert U.dim == d and block.W.contains(U)
        assert U.intersect_dim(block.L) == 0 and U.intersect_dim(g.N) == 0


@pytest.mark.parametrize("q,n,d", [(2, 4, 2), (2, 5, 3), (3, 4, 2)])
def test_case_one_frame(built, q, n, d):
    _, ctx = built(q, n, d) if (q, n, d) != (2, 5, 3) else build_landmarks(GraphSpec.of(q, n, d))
    assert ctx.anchor.dim == n - 1 and ctx.N.contains(ctx.anchor)
    assert len(ctx.blocks) == q ** (n - 1)
    for b in ctx.blocks:
        assert b.W.dim == d + 1
        assert b.W.sum(ctx.N).dim == n + d
        assert b.L == b.W.intersect(ctx.N) and b.L.dim == 1


@pytest.mark.parametrize("q,n,d", [(2, 2, 2), (2, 3, 2), (3, 2, 2)])
def test_case_two_frame(built, q, n, d):
    _, ctx = built(q, n, d)
    assert ctx.anchor.dim == 1 and ctx.N.contains(ctx.anchor)
    assert len(ctx.blocks) == q**n
    for b, V in zip(ctx.blocks, ctx.partition.small_pieces):
        assert b.W == ctx.anchor.sum(V) and b.W.dim == d + 1 and b.L == ctx.anchor


def all_hyperplanes(W):
    """Every (dim W - 1)-subspace of W, by enumerating generator pairs/triples."""
    f = W.field
    vecs = [v for v in W.vectors() if v.any()]
    found = set()
    for combo in itertools.combinations(range(len(vecs)), W.dim - 1):
        S = Subspace.span(f, np.array([vecs[i] for i in combo]), W.ambient)
        if S.dim == W.dim - 1:
            found.add(S)
    return found


def test_hyperplanes_avoiding_small():
    W = Subspace.coordinate(F2, 3, [0, 1])
    L = Subspace.span(F2, [1, 1, 0], 3)
    hs = hyperplanes_avoiding(W, L)
    lines = {Subspace.span(F2, v, 3) for v in ([1, 0, 0], [0, 1, 0])}
    assert set(hs) == lines and len(hs) == 2


def test_hyperplanes_avoiding_filters_all_hyperplanes():
    W = Subspace.span(F2, [[1, 0, 0, 1, 0], [0, 1, 0, 0, 1], [0, 0, 1, 1, 1]])
    L = Subspace.span(F2, [1, 1, 0, 1, 1], 5)
    every = all_hyperplanes(W)
    assert len(every) == 7
    avoiding = {U for U in every if U.intersect_dim(L) == 0}
    assert len(avoiding) == 4
    hs = hyperplanes_avoiding(W, L)
    assert set(hs) == avoiding and len(hs) == 4
    for U in hs:
        assert U.sum(L) == W and U.intersect_dim(L) == 0


def test_hyperplanes_avoiding_errors():
    W = Subspace.coordinate(F2, 3, [0, 1])
    with pytest.raises(ValueError):
        hyperplanes_avoiding(W, Subspace.span(F2, [0, 0, 1], 3))


def test_signature_examples(built):
    M, ctx = built(2, 2, 2)
    g = ctx.graph
    zero = np.zeros((2, 2), dtype=int)
    sig = signature(g, zero, M)
    assert sig.tolist() == [rank(g.field, m) for m in M.matrices]
    assert len(sig) == 16 and sig.max() <= 2
    for k in range(len(M)):
        assert signature(g, M[k], M)[k] == 0


@pytest.mark.parametrize("q,n,d", SPECS)
def test_constructed_sets_resolve(built, q, n, d):
    M, _ = built(q, n, d)
    cert = verify_resolving(M)
    assert cert.resolving and cert.counterexample is None
    assert cert.stats["vertices_checked"] == q ** (n * d)


def brute_force_resolving(g, M):
    sigs = {tuple(signature(g, g.vertex(i), M).tolist()) for i in range(g.num_vertices)}
    return len(sigs) == g.num_vertices


def test_verifier_agrees_with_brute_force(built):
    M, ctx = built(2, 2, 2)
    g = ctx.graph
    assert brute_force_resolving(g, M)
    rng = np.random.default_rng(5)
    for _ in range(30):
        sub = LandmarkSet.from_indices(g, rng.choice(16, size=rng.integers(1, 6), replace=False))
        assert verify_resolving(sub).resolving == brute_force_resolving(g, sub)


def test_trivial_landmark_sets():
    g = GraphSpec.of(2, 2, 2)
    cert = verify_resolving(LandmarkSet(g, []))
    assert not cert.resolving and cert.counterexample == (0, 1)
    assert verify_resolving(LandmarkSet.from_indices(g, range(16))).resolving


def test_counterexample_is_recheckable():
    g = GraphSpec.of(3, 2, 2)
    M = LandmarkSet.from_indices(g, [0, 1, 5])
    cert = verify_resolving(M)
    assert not cert.resolving
    u, v = cert.counterexample
    assert u < v
    assert np.array_equal(signature(g, g.vertex(u), M), signature(g, g.vertex(v), M))


def test_first_collision_order():
    packed = np.array([[3], [1], [3], [1]], dtype=np.uint8)
    assert first_collision(packed) == (1, 3)
    assert first_collision(np.array([[1], [2]], dtype=np.uint8)) is None


def test_parallel_matches_serial():
    M, _ = build_landmarks(GraphSpec.of(2, 4, 3))
    one = verify_resolving(M, workers=1, chunk=512)
    four = verify_resolving(M, workers=4, chunk=512)
    assert one.canonical() == four.canonical()
    broken = LandmarkSet(M.graph, M.matrices[:6])
    assert verify_resolving(broken, workers=1, chunk=512).canonical() == verify_resolving(broken, workers=4, chunk=512).canonical()


def check_witness(g, M, ctx, a, b):
    A, B = g.vertex(a), g.vertex(b)
    w = find_separating_landmark(A, B, ctx)
    assert np.array_equal(M[w.position], w.landmark)
    assert M.provenance[w.position] == (w.block, w.coords)
    U = subspace_of(g, M[w.position])
    dA = subspace_of(g, A).intersect_dim(U)
    dB = subspace_of(g, B).intersect_dim(U)
    assert (dA, dB) == w.dims and dA != dB
    assert distance(g, A, M[w.position]) != distance(g, B, M[w.position])
    return w


@pytest.mark.parametrize("q,n,d", [(2, 2, 2), (3, 2, 2)])
def test_witness_all_pairs_small(built, q, n, d):
    M, ctx = built(q, n, d)
    g = ctx.graph
    branches = Counter()
    for a, b in itertools.combinations(range(g.num_vertices), 2):
        branches[check_witness(g, M, ctx, a, b).branch] += 1
    assert set(branches) == {"1.1", "1.2.1", "1.2.2"}


def test_witness_sampled_h242(built):
    M, ctx = built(2, 4, 2)
    g = ctx.graph
    rng = np.random.default_rng(42)
    branches = Counter()
    for a, b in rng.integers(0, 256, size=(800, 2)).tolist():
        if a != b:
            branches[check_witness(g, M, ctx, a, b).branch] += 1
    assert set(branches) == {"1.1", "1.2.1", "1.2.2"}


def test_witness_branch_122_membership(built):
    M, ctx = built(2, 4, 2)
    g = ctx.graph
    for a, b in itertools.combinations(range(g.num_vertices), 2):
        w = find_separating_landmark(g.vertex(a), g.vertex(b), ctx)
        if w.branch == "1.2.2":
            break
    f = g.field
    U = w.subspace
    assert U.member(f.add(w.alpha, w.theta))
    assert not U.member(w.alpha) and not U.member(w.theta)


def test_witness_rejects_equal_vertices(built):
    _, ctx = built(2, 2, 2)
    v = ctx.graph.vertex(3)
    with pytest.raises(ValueError):
        find_separating_landmark(v, v, ctx)


def test_build_domain_errors():
    with pytest.raises(ValueError):
        build_landmarks(GraphSpec.of(2, 3, 1))
    with pytest.raises(ValueError):
        build_landmarks(GraphSpec.of(2, 2, 3))


def test_landmark_file_round_trip(built):
    M, _ = built(3, 2, 2)
    back = LandmarkSet.from_dict(M.to_dict())
    assert back.indices == M.indices and back.provenance == M.provenance
    bad = M.to_dict()
    bad["landmarks"][0] = [[0, 5], [0, 0]]
    with pytest.raises(ValueError):
        LandmarkSet.from_dict(bad)


def test_rank_table_is_shared_distance(built):
    M, ctx = built(2, 3, 2)
    g = ctx.graph
    table = rank_table(g)
    for lm in M.indices[:5]:
        for v in range(0, 64, 7):
            assert table[g.difference_indices(np.array([v]), lm)[0]] == distance(g, g.vertex(v), g.vertex(lm))
