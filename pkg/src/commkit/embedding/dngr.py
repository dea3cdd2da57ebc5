"""DNGR: a denoising autoencoder over the row-scaled PPMI matrix."""

from __future__ import annotations

import numpy as np

from .. import proximity
from .._validation import check_random_state
from ..exceptions import ArgumentError
from ..graph import Graph
from .base import Embedding, TrainConfig, check_finite_loss

ACTIVATIONS = {
    "sigmoid": (lambda x: 1.0 / (1.0 + np.exp(-x)), lambda y: y * (1.0 - y)),
    "tanh": (np.tanh, lambda y: 1.0 - y * y),
    "linear": (lambda x: x, lambda y: np.ones_like(y)),
}


def init_autoencoder(n_in: int, hidden: int, dim: int, rng) -> list[np.ndarray]:
    """Glorot-uniform weights and zero biases for ``n -> h -> d -> h -> n``."""
    sizes = [n_in, hidden, dim, hidden, n_in]
    params = []
    for a, b in zip(sizes[:-1], sizes[1:]):
        lim = np.sqrt(6.0 / (a + b))
        params.append(rng.uniform(-lim, lim, size=(a, b)))
        params.append(np.zeros(b))
    return params


def forward(params, X, activation: str = "sigmoid"):
    """Layer activations ``[X, h1, z, h2, out]``; the output layer is linear."""
    act, _ = ACTIVATIONS[activation]
    acts = [X]
    n_layers = len(params) // 2
    for layer in range(n_layers):
        W, b = params[2 * layer], params[2 * layer + 1]
        pre = acts[-1] @ W + b
        acts.append(pre if layer == n_layers - 1 else act(pre))
    return acts


def loss_and_grads(params, X_in, X_target, activation: str = "sigmoid"):
    """``1/2 ||out - X_target||^2`` summed over the batch, with gradients."""
    _, dact = ACTIVATIONS[activation]
    acts = forward(params, X_in, activation)
    err = acts[-1] - X_target
    loss = 0.5 * float(np.sum(err * err))
    grads = [None] * len(params)
    delta = err
    for layer in reversed(range(len(params) // 2)):
        grads[2 * layer] = acts[layer].T @ delta
        grads[2 * layer + 1] = delta.sum(axis=0)
        if layer:
            delta = (delta @ params[2 * layer].T) * dact(acts[layer])
    return loss, grads


def scaled_ppmi(G: Graph, alpha: float, length: int) -> np.ndarray:
    """PPMI with each row divided by its maximum (all-zero rows stay zero)."""
    M = proximity.ppmi(G, alpha, length).matrix.copy()
    mx = M.max(axis=1, keepdims=True)
    return np.divide(M, mx, out=np.zeros_like(M), where=mx > 0)


def train_autoencoder(X: np.ndarray, cfg: TrainConfig, method: str = "dngr"):
    """Per-row SGD with masking noise; returns ``(params, per-epoch mean loss)``.

    The logged loss is the clean reconstruction error after each epoch.
    """
    if cfg.activation not in ACTIVATIONS:
        raise ArgumentError(f"unknown activation {cfg.activation!r}")
    rng = check_random_state(cfg.seed)
    n = X.shape[0]
    params = init_autoencoder(X.shape[1], cfg.hidden, cfg.dim, rng)
    lr = cfg.learning_rate
    log = []
    for epoch in range(cfg.epochs):
        for i in rng.permutation(n):
            x = X[i : i + 1]
            keep = rng.random(x.shape) >= cfg.noise_prob
            _, grads = loss_and_grads(params, x * keep, x, cfg.activation)
            for p, g in zip(params, grads):
                p -= lr * g
        out = forward(params, X, cfg.activation)[-1]
        log.append(check_finite_loss(0.5 * np.sum((out - X) ** 2) / n, method, epoch))
    return params, log


def dngr(G: Graph, config: TrainConfig | None = None) -> Embedding:
    cfg = (config or TrainConfig()).resolved("dngr")
    X = scaled_ppmi(G, cfg.ppmi_alpha, cfg.ppmi_length)
    params, log = train_autoencoder(X, cfg)
    Z = forward(params, X, cfg.activation)[2]
    return Embedding(Z, "dngr", log)
