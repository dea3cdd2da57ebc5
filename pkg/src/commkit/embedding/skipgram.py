"""Skip-gram with negative sampling over walk corpora; DeepWalk and Node2Vec."""

from __future__ import annotations

import numba
import numpy as np

from .._validation import check_random_state
from ..exceptions import ArgumentError, MethodUndefinedError, TrainingError
from ..graph import Graph
from .base import Embedding, TrainConfig, check_finite_loss
from .walks import WalkCorpus, generate_walks

NOISE_POWER = 0.75
MIN_LR_FRACTION = 1e-4


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -x)


def sgns_pair_loss(w: np.ndarray, c: np.ndarray, negs: np.ndarray) -> float:
    """``-log s(<w, c>) - sum_k log s(-<w, n_k>)`` for one (center, context) pair."""
    return float(-_log_sigmoid(w @ c) - np.sum(_log_sigmoid(-(negs @ w))))


def sgns_pair_grad(w: np.ndarray, c: np.ndarray, negs: np.ndarray):
    """Gradients of :func:`sgns_pair_loss` w.r.t. ``w``, ``c`` and each negative row."""
    gp = 1.0 / (1.0 + np.exp(-(w @ c))) - 1.0
    gn = 1.0 / (1.0 + np.exp(-(negs @ w)))
    grad_w = gp * c + gn @ negs
    grad_c = gp * w
    grad_negs = gn[:, None] * w[None, :]
    return grad_w, grad_c, grad_negs


@numba.njit(cache=True)
def _sgd_epoch(W, C, centers, contexts, negs, lr0, step0, total_steps, min_frac):
    d = W.shape[1]
    k = negs.shape[1]
    grad_w = np.empty(d)
    loss = 0.0
    for t in range(centers.shape[0]):
        frac = 1.0 - (step0 + t) / total_steps
        if frac < min_frac:
            frac = min_frac
        lr = lr0 * frac
        u = centers[t]
        for j in range(d):
            grad_w[j] = 0.0
        # positive pair
        v = contexts[t]
        x = 0.0
        for j in range(d):
            x += W[u, j] * C[v, j]
        if x >= 0:
            loss += np.log1p(np.exp(-x))
        else:
            loss += -x + np.log1p(np.exp(x))
        g = 1.0 / (1.0 + np.exp(-x)) - 1.0
        for j in range(d):
            grad_w[j] += g * C[v, j]
            C[v, j] -= lr * g * W[u, j]
        for s in range(k):
            v = negs[t, s]
            x = 0.0
            for j in range(d):
                x += W[u, j] * C[v, j]
            if x >= 0:
                loss += x + np.log1p(np.exp(-x))
            else:
                loss += np.log1p(np.exp(x))
            g = 1.0 / (1.0 + np.exp(-x))
            for j in range(d):
                grad_w[j] += g * C[v, j]
                C[v, j] -= lr * g * W[u, j]
        for j in range(d):
            W[u, j] -= lr * grad_w[j]
    return loss


def _window_pairs(walk: np.ndarray, window: int):
    L = len(walk)
    centers, contexts = [], []
    for off in range(1, window + 1):
        if off >= L:
            break
        centers.extend((walk[:-off], walk[off:]))
        contexts.extend((walk[off:], walk[:-off]))
    if not centers:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(centers), np.concatenate(contexts)


def noise_distribution(corpus: WalkCorpus) -> np.ndarray:
    counts = corpus.token_counts().astype(float) ** NOISE_POWER
    return counts / counts.sum()


def skipgram_train(corpus: WalkCorpus, config: TrainConfig | None = None) -> Embedding:
    """Train input/output vectors by per-pair SGD; return the input vectors.

    The learning rate decays linearly from ``learning_rate`` to
    ``learning_rate * 1e-4`` over all epochs. Each epoch visits walks in a
    fresh random order; negatives come from the corpus unigram
    distribution raised to 0.75.
    """
    cfg = (config or TrainConfig()).resolved("skipgram")
    if not corpus.walks:
        raise ArgumentError("empty walk corpus")
    rng = check_random_state(cfg.seed)
    n, d = corpus.n_vertices, cfg.dim
    W = (rng.random((n, d)) - 0.5) / d
    C = np.zeros((n, d))
    if cfg.epochs == 0:
        return Embedding(W, "skipgram")
    pairs = [_window_pairs(w, cfg.window) for w in corpus.walks]
    n_pairs = sum(len(c) for c, _ in pairs)
    if n_pairs == 0:
        raise MethodUndefinedError("walk corpus has no co-occurring vertex pairs (graph has no edges?)")
    noise = noise_distribution(corpus)
    total = float(n_pairs * cfg.epochs)
    log = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(len(pairs))
        centers = np.concatenate([pairs[i][0] for i in order])
        contexts = np.concatenate([pairs[i][1] for i in order])
        negs = rng.choice(n, size=(len(centers), cfg.negatives), p=noise)
        loss = _sgd_epoch(W, C, centers, contexts, negs, cfg.learning_rate,
                          epoch * n_pairs, total, MIN_LR_FRACTION)
        log.append(check_finite_loss(loss / n_pairs, "skipgram", epoch))
    if not np.all(np.isfinite(W)):
        raise TrainingError("skip-gram produced non-finite vectors")
    return Embedding(W, "skipgram", log, info={"context_vectors": C})


def _corpus(G: Graph, cfg: TrainConfig, mode: str) -> WalkCorpus:
    if G.n_edges == 0:
        raise MethodUndefinedError(f"{mode} walks carry no information on a graph without edges")
    return generate_walks(G, cfg.walks_per_vertex, cfg.walk_length, mode, cfg.p, cfg.q, cfg.seed)


def deepwalk(G: Graph, config: TrainConfig | None = None) -> Embedding:
    cfg = config or TrainConfig()
    emb = skipgram_train(_corpus(G, cfg, "uniform"), cfg)
    return Embedding(emb.vectors, "deepwalk", emb.train_log, emb.info)


def node2vec(G: Graph, config: TrainConfig | None = None) -> Embedding:
    cfg = config or TrainConfig()
    emb = skipgram_train(_corpus(G, cfg, "node2vec"), cfg)
    return Embedding(emb.vectors, "node2vec", emb.train_log, emb.info)
