import io

import numpy as np
import pytest
from conftest import random_graph, two_triangles

from commkit import Graph
from commkit.embedding import (
    GraphEmbedding,
    TrainConfig,
    canonical_method,
    deepwalk,
    dngr,
    dump_embedding,
    embed,
    generate_walks,
    graph_factorisation,
    grarep,
    hope,
    laplacian_eigenmaps,
    load_embedding,
    node2vec,
    skipgram_train,
)
from commkit.embedding.dngr import init_autoencoder, loss_and_grads
from commkit.embedding.factorization import gf_gradient, gf_loss, grarep_allocation
from commkit.embedding.skipgram import sgns_pair_grad, sgns_pair_loss
from commkit.exceptions import ArgumentError, MethodUndefinedError
from commkit.graph import laplacian
from commkit.numkernel import pairwise_euclidean


def numeric_grad(f, x, h=1e-6):
    g = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        old = x[idx]
        x[idx] = old + h
        up = f()
        x[idx] = old - h
        down = f()
        x[idx] = old
        g[idx] = (up - down) / (2 * h)
    return g


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)


def separation(Z, labels):
    D = pairwise_euclidean(Z)
    same = labels[:, None] == labels[None, :]
    off = ~np.eye(len(labels), dtype=bool)
    return D[same & off].mean(), D[~same].mean()


TWO_K3_LABELS = np.array([0, 0, 0, 1, 1, 1])


# ---------------------------------------------------------------- gradients


@pytest.mark.parametrize("seed", range(5))
def test_sgns_gradient_matches_central_differences(seed):
    rng = np.random.default_rng(seed)
    w, c, negs = rng.normal(size=4), rng.normal(size=4), rng.normal(size=(3, 4))
    gw, gc, gn = sgns_pair_grad(w, c, negs)
    f = lambda: sgns_pair_loss(w, c, negs)  # noqa: E731
    assert rel_err(gw, numeric_grad(f, w)) <= 1e-5
    assert rel_err(gc, numeric_grad(f, c)) <= 1e-5
    assert rel_err(gn, numeric_grad(f, negs)) <= 1e-5


@pytest.mark.parametrize("seed", range(5))
def test_gf_gradient_matches_central_differences(seed):
    rng = np.random.default_rng(seed)
    G = random_graph(6, 0.5, rng, connected_min_degree=True)
    Z = rng.normal(size=(6, 3))
    edges = G.edge_array
    g = gf_gradient(Z, edges, 0.1)
    assert rel_err(g, numeric_grad(lambda: gf_loss(Z, edges, 0.1), Z)) <= 1e-5


@pytest.mark.parametrize("activation", ["sigmoid", "tanh", "linear"])
def test_dngr_gradient_matches_central_differences(activation):
    rng = np.random.default_rng(7)
    params = init_autoencoder(6, 5, 2, rng)
    X = rng.random((4, 6))
    target = rng.random((4, 6))
    _, grads = loss_and_grads(params, X, target, activation)
    for P, gP in zip(params, grads):
        num = numeric_grad(lambda: loss_and_grads(params, X, target, activation)[0], P)
        assert rel_err(gP, num) <= 1e-4


# ------------------------------------------------------- Laplacian eigenmaps


def test_le_separates_two_triangles_by_sign():
    Z = laplacian_eigenmaps(two_triangles(), 1).vectors[:, 0]
    assert np.all(np.sign(Z[:3]) == np.sign(Z[0]))
    assert np.all(np.sign(Z[3:]) == -np.sign(Z[0]))


@pytest.mark.parametrize("seed", range(4))
def test_le_constraint_and_objective(seed):
    rng = np.random.default_rng(seed)
    G = random_graph(10, 0.4, rng, connected_min_degree=True)
    emb = laplacian_eigenmaps(G, 3)
    Z = emb.vectors
    D = np.diag(G.degrees.astype(float))
    np.testing.assert_allclose(Z.T @ D @ Z, np.eye(3), atol=1e-10)
    assert np.trace(Z.T @ laplacian(G) @ Z) == pytest.approx(emb.info["eigenvalues"].sum(), abs=1e-10)
    # orthogonal to the trivial solution in the D inner product
    np.testing.assert_allclose(np.ones(10) @ D @ Z, 0.0, atol=1e-10)


def test_le_rejects_bad_dim_and_isolated_vertices():
    with pytest.raises(ArgumentError):
        laplacian_eigenmaps(two_triangles(), 6)
    with pytest.raises(MethodUndefinedError):
        laplacian_eigenmaps(Graph(3, [(0, 1)]), 1)


# ------------------------------------------------------ graph factorisation


def test_gf_recovers_single_edge():
    emb = graph_factorisation(Graph(2, [(0, 1)]), TrainConfig(dim=1, lambda_reg=0.0, epochs=2000))
    assert emb.vectors[0] @ emb.vectors[1] == pytest.approx(1.0, abs=0.05)


def test_gf_loss_decreases_when_smoothed():
    G = random_graph(12, 0.3, np.random.default_rng(3), connected_min_degree=True)
    log = np.array(graph_factorisation(G, TrainConfig(dim=3, epochs=400)).train_log)
    smooth = log.reshape(-1, 10).mean(axis=1)
    assert np.all(np.diff(smooth) <= 1e-12)


def test_gf_strong_regularisation_shrinks_vectors():
    G = two_triangles()
    weak = graph_factorisation(G, TrainConfig(dim=2, lambda_reg=0.0, epochs=300)).vectors
    strong = graph_factorisation(G, TrainConfig(dim=2, lambda_reg=5.0, epochs=300)).vectors
    assert np.linalg.norm(strong) < 0.1 * np.linalg.norm(weak)


# ------------------------------------------------------------------ GraRep


@pytest.mark.parametrize("dim,order,expected", [(6, 3, [2, 2, 2]), (7, 3, [3, 2, 2]), (2, 3, [2, 0, 0])])
def test_grarep_allocation(dim, order, expected):
    assert grarep_allocation(dim, order) == expected


def test_grarep_triangle_first_order_spectrum():
    K3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    s = grarep(K3, 3, order=1).info["singular_values"][0]
    # X_1 = log(1.5) (J - I), whose singular values are 2c, c, c
    np.testing.assert_allclose(s, np.log(1.5) * np.array([2.0, 1.0, 1.0]), atol=1e-12)


@pytest.mark.parametrize("dim", [3, 4, 6, 7])
def test_grarep_output_width(dim):
    assert grarep(two_triangles(), dim).dim == dim


def test_grarep_distances_are_permutation_invariant():
    rng = np.random.default_rng(11)
    G = random_graph(9, 0.4, rng, connected_min_degree=True)
    perm = rng.permutation(9)
    D = pairwise_euclidean(grarep(G, 4, order=2).vectors)
    Dp = pairwise_euclidean(grarep(G.relabel(perm), 4, order=2).vectors)
    # relabel sends vertex v to perm[v]
    np.testing.assert_allclose(Dp[np.ix_(perm, perm)], D, atol=1e-9)


# -------------------------------------------------------------------- HOPE


def test_hope_residual_is_discarded_spectrum():
    G = random_graph(10, 0.3, np.random.default_rng(5), connected_min_degree=True)
    from commkit.proximity import katz

    S = katz(G, 0.05).matrix
    emb = hope(G, 3, "katz", beta=0.05)
    approx = emb.vectors @ emb.info["target"].T
    s_all = np.linalg.svd(S, compute_uv=False)
    assert np.linalg.norm(S - approx) ** 2 == pytest.approx(np.sum(s_all[3:] ** 2), rel=1e-8)


def test_hope_single_edge_katz_cross_product():
    emb = hope(Graph(2, [(0, 1)]), 2, "katz", beta=0.5)
    assert emb.vectors[0] @ emb.info["target"][1] == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_hope_rooted_pagerank_without_restart_is_identity():
    emb = hope(two_triangles(), 3, "rooted_pagerank", alpha=0.0)
    np.testing.assert_allclose(emb.info["singular_values"], 1.0, atol=1e-12)


def test_hope_rejects_other_measures():
    with pytest.raises(ArgumentError):
        hope(two_triangles(), 2, "ppmi")


# ------------------------------------------------------------------- walks


def test_walks_on_single_edge_alternate():
    corpus = generate_walks(Graph(2, [(0, 1)]), walks_per_vertex=3, walk_length=7, seed=1)
    for w in corpus.walks:
        assert len(w) == 7
        assert np.all(np.diff(w) != 0)


def test_walks_on_path_leave_middle_evenly():
    P3 = Graph(3, [(0, 1), (1, 2)])
    corpus = generate_walks(P3, walks_per_vertex=4000, walk_length=2, seed=2)
    nxt = np.array([w[1] for w in corpus.walks if w[0] == 1])
    frac = np.mean(nxt == 0)
    assert abs(frac - 0.5) < 4 * np.sqrt(0.25 / len(nxt))


def test_walks_stop_at_isolated_vertex():
    corpus = generate_walks(Graph(3, [(0, 1)]), walks_per_vertex=2, walk_length=5, seed=0)
    assert all(len(w) == 1 for w in corpus.walks if w[0] == 2)


def _second_order_counts(corpus, n):
    counts = np.zeros((n, n, n))
    for w in corpus.walks:
        for a, b, c in zip(w[:-2], w[1:-1], w[2:]):
            counts[a, b, c] += 1
    return counts


def test_node2vec_with_unit_parameters_matches_uniform_law():
    G = random_graph(7, 0.5, np.random.default_rng(4), connected_min_degree=True)
    u = _second_order_counts(generate_walks(G, 200, 20, "uniform", seed=1), 7)
    b = _second_order_counts(generate_walks(G, 200, 20, "node2vec", 1.0, 1.0, seed=2), 7)
    # chi-square homogeneity over (prev, cur) contexts; Bonferroni-safe bound
    for a in range(7):
        for c in range(7):
            row_u, row_b = u[a, c], b[a, c]
            tot = row_u + row_b
            keep = tot > 0
            if keep.sum() < 2:
                continue
            nu, nb = row_u.sum(), row_b.sum()
            exp_u = tot[keep] * nu / (nu + nb)
            exp_b = tot[keep] * nb / (nu + nb)
            stat = np.sum((row_u[keep] - exp_u) ** 2 / exp_u + (row_b[keep] - exp_b) ** 2 / exp_b)
            assert stat < 30.0


def test_node2vec_small_return_parameter_favours_backtracking():
    P4 = Graph(4, [(0, 1), (1, 2), (2, 3)])
    corpus = generate_walks(P4, 500, 3, "node2vec", p=0.01, q=1.0, seed=3)
    backs = [w[2] == w[0] for w in corpus.walks if w[0] == 1 and len(w) == 3 and w[1] == 2]
    assert np.mean(backs) > 0.9


def test_walks_are_deterministic():
    G = two_triangles()
    a = generate_walks(G, 3, 10, "node2vec", 0.5, 2.0, seed=9)
    b = generate_walks(G, 3, 10, "node2vec", 0.5, 2.0, seed=9)
    assert all(np.array_equal(x, y) for x, y in zip(a.walks, b.walks))


# ---------------------------------------------------------------- training


def test_zero_epochs_returns_initialisation():
    corpus = generate_walks(two_triangles(), 2, 5, seed=0)
    cfg = TrainConfig(dim=3, epochs=0, seed=4)
    W = skipgram_train(corpus, cfg).vectors
    rng = np.random.default_rng(4)
    np.testing.assert_array_equal(W, (rng.random((6, 3)) - 0.5) / 3)


@pytest.mark.parametrize("method", ["deepwalk", "node2vec", "dngr"])
def test_learned_embeddings_separate_two_triangles(method):
    emb = embed(two_triangles(), method, TrainConfig(dim=2, seed=0))
    intra, inter = separation(emb.vectors, TWO_K3_LABELS)
    assert intra < inter


@pytest.mark.parametrize("method", ["deepwalk", "node2vec", "dngr", "graph_factorisation"])
def test_training_is_deterministic(method):
    cfg = TrainConfig(dim=2, seed=5, epochs=3)
    a = embed(two_triangles(), method, cfg)
    b = embed(two_triangles(), method, cfg)
    np.testing.assert_array_equal(a.vectors, b.vectors)
    assert a.train_log == b.train_log


def test_skipgram_methods_reject_edgeless_graph():
    for fn in (deepwalk, node2vec):
        with pytest.raises(MethodUndefinedError):
            fn(Graph(4, []), TrainConfig(dim=2, epochs=1))


def test_dngr_linear_identity_autoencoder_fits():
    cfg = TrainConfig(dim=6, hidden=6, noise_prob=0.0, activation="linear",
                      learning_rate=0.05, epochs=5000, seed=0)
    emb = dngr(two_triangles(), cfg)
    assert emb.train_log[-1] < 1e-3


# ------------------------------------------------------------- front ends


@pytest.mark.parametrize("method", ["le", "gf", "grarep", "hope", "deepwalk", "node2vec", "dngr"])
def test_embed_shapes(method):
    emb = embed(two_triangles(), method, TrainConfig(dim=2, epochs=2))
    assert emb.vectors.shape == (6, 2)
    assert emb.method == canonical_method(method)


def test_unknown_method():
    with pytest.raises(ArgumentError):
        canonical_method("word2vec")


def test_dump_round_trip():
    emb = embed(two_triangles(), "grarep", TrainConfig(dim=3))
    buf = io.StringIO()
    dump_embedding(emb, buf)
    buf.seek(0)
    np.testing.assert_array_equal(load_embedding(buf).vectors, emb.vectors)


def test_graph_embedding_estimator():
    est = GraphEmbedding("deepwalk", dim=2, seed=1, epochs=2)
    assert est.get_params()["config"] == {"epochs": 2}
    est.set_params(walk_length=10)
    Z = est.fit(two_triangles()).transform(two_triangles())
    assert Z.shape == (6, 2)
    ref = embed(two_triangles(), "deepwalk", TrainConfig(dim=2, seed=1, epochs=2, walk_length=10))
    np.testing.assert_array_equal(Z, ref.vectors)
    np.testing.assert_array_equal(est.fit_transform(two_triangles()), Z)
    with pytest.raises(ArgumentError):
        est.transform(Graph(3, []))
    with pytest.raises(ArgumentError):
        GraphEmbedding(bogus=1)
