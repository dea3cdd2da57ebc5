"""Reference community detection algorithms: Louvain, label propagation, CNM.

All three choose their own number of communities. They operate on dense
weight matrices, which is adequate for graphs of a few hundred vertices.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from ._validation import check_graph, check_random_state
from .exceptions import MethodUndefinedError
from .graph import Graph
from .metrics import modularity
from .partition import Partition, canonical_labels

MAX_LPA_SWEEPS = 100


def _louvain_one_level(W: np.ndarray, m2: float, rng: np.random.Generator) -> np.ndarray:
    """Local moving phase on weight matrix ``W``; returns a community per node."""
    N = W.shape[0]
    k = W.sum(axis=1)
    comm = np.arange(N)
    tot = k.copy()
    self_w = np.diag(W).copy()
    improved = True
    while improved:
        improved = False
        for i in rng.permutation(N):
            ci = comm[i]
            ki = k[i]
            links = np.bincount(comm, weights=W[i], minlength=N)
            links[ci] -= self_w[i]
            tot[ci] -= ki
            gain = links - tot * ki / m2
            cand = np.flatnonzero(links > 0)
            best = ci
            best_gain = gain[ci]
            for c in cand:
                if gain[c] > best_gain + 1e-12:
                    best, best_gain = c, gain[c]
            tot[best] += ki
            if best != ci:
                comm[i] = best
                improved = True
    return canonical_labels(comm)


def _aggregate(W: np.ndarray, comm: np.ndarray) -> np.ndarray:
    C = np.zeros((W.shape[0], comm.max() + 1))
    C[np.arange(W.shape[0]), comm] = 1.0
    return C.T @ W @ C


def louvain(G: Graph, seed=None, return_levels: bool = False):
    """Louvain modularity optimisation (local moving + aggregation).

    Parameters
    ----------
    G : Graph
    seed : int, Generator or None
        Controls the node visiting order.
    return_levels : bool
        Also return the flat partition reached after each aggregation level.
    """
    G = check_graph(G)
    if G.n_edges == 0:
        raise MethodUndefinedError("Louvain is undefined on a graph without edges")
    rng = check_random_state(seed)
    W = G._adjacency.astype(float)
    m2 = W.sum()
    membership = np.arange(G.n_vertices)
    levels = []
    while True:
        comm = _louvain_one_level(W, m2, rng)
        if comm.max() + 1 == W.shape[0]:
            break
        membership = comm[membership]
        levels.append(Partition(membership))
        W = _aggregate(W, comm)
    part = Partition(membership)
    if return_levels:
        return part, levels
    return part


def label_propagation(G: Graph, seed=None, max_sweeps: int = MAX_LPA_SWEEPS) -> Partition:
    """Asynchronous label propagation with random tie-breaking.

    A vertex keeps its label when that label is already among the most
    frequent in its neighbourhood. Stops once every vertex holds a modal
    label, or after ``max_sweeps`` sweeps.
    """
    G = check_graph(G)
    rng = check_random_state(seed)
    n = G.n_vertices
    nbrs = G.neighbors
    labels = np.arange(n)

    def modes(v):
        counts = np.bincount(labels[nbrs[v]], minlength=n)
        return np.flatnonzero(counts == counts.max())

    for _ in range(max_sweeps):
        for v in rng.permutation(n):
            if len(nbrs[v]) == 0:
                continue
            best = modes(v)
            if labels[v] not in best:
                labels[v] = best[rng.integers(len(best))]
        if all(len(nbrs[v]) == 0 or labels[v] in modes(v) for v in range(n)):
            break
    return Partition(labels)


def greedy_modularity(G: Graph) -> Partition:
    """Clauset-Newman-Moore agglomeration: merge the pair with the largest gain.

    Ties go to the smallest ``(i, j)`` pair of community ids, where a merged
    community keeps the smaller id.
    """
    G = check_graph(G)
    if G.n_edges == 0:
        raise MethodUndefinedError("greedy modularity is undefined on a graph without edges")
    n = G.n_vertices
    m2 = 2.0 * G.n_edges
    E = G._adjacency / m2
    a = G.degrees / m2
    active = np.ones(n, dtype=bool)
    labels = np.arange(n)
    iu = np.triu(np.ones((n, n), dtype=bool), 1)
    while active.sum() > 1:
        connected = (E > 0) & iu & active[:, None] & active[None, :]
        if not connected.any():
            break
        dq = np.where(connected, 2.0 * (E - np.outer(a, a)), -np.inf)
        i, j = divmod(int(np.argmax(dq)), n)
        if dq[i, j] <= 0:
            break
        E[i, :] += E[j, :]
        E[:, i] += E[:, j]
        E[j, :] = 0.0
        E[:, j] = 0.0
        E[i, i] = 0.0
        a[i] += a[j]
        a[j] = 0.0
        active[j] = False
        labels[labels == j] = i
    return Partition(labels)


class _GraphClusterer(ClusterMixin, BaseEstimator):
    def fit_predict(self, G, y=None):
        return self.fit(G).labels_

    def _finish(self, G, part: Partition):
        self.partition_ = part
        self.labels_ = part.labels
        self.n_clusters_ = part.k
        self.modularity_ = modularity(G, part) if G.n_edges else float("nan")
        return self


class Louvain(_GraphClusterer):
    """Estimator wrapper around :func:`louvain`."""

    def __init__(self, random_state=None):
        self.random_state = random_state

    def fit(self, G, y=None):
        return self._finish(G, louvain(G, self.random_state))


class LabelPropagation(_GraphClusterer):
    def __init__(self, random_state=None, max_sweeps=MAX_LPA_SWEEPS):
        self.random_state = random_state
        self.max_sweeps = max_sweeps

    def fit(self, G, y=None):
        return self._finish(G, label_propagation(G, self.random_state, self.max_sweeps))


class GreedyModularity(_GraphClusterer):
    def fit(self, G, y=None):
        return self._finish(G, greedy_modularity(G))


BASELINES = {
    "louvain": lambda G, seed: louvain(G, seed),
    "label_propagation": lambda G, seed: label_propagation(G, seed),
    "greedy_modularity": lambda G, seed: greedy_modularity(G),
}
