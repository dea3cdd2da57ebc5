"""Community detection by hierarchical clustering of node proximities.

Three frameworks share the clustering back end:

* ``node``: cluster a node dissimilarity matrix directly;
* ``spectral``: cluster rows of the ``K`` leading eigenvectors of a node
  similarity matrix under the Euclidean metric;
* ``representation``: cluster rows of a learned embedding under the
  Euclidean metric.

Each is available as a function returning a :class:`Partition` and as a
scikit-learn style estimator whose ``fit`` takes a :class:`Graph`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from . import hierclust, numkernel, proximity
from ._validation import check_graph, check_positive_int
from .embedding import TrainConfig, canonical_method, embed
from .exceptions import ArgumentError
from .graph import Graph
from .partition import Partition

FRAMEWORKS = ("node", "spectral", "representation")
EIG_RULES = ("largest", "smallest")


def _check_k(K, n: int) -> int:
    K = check_positive_int(K, "K")
    if K > n:
        raise ArgumentError(f"K={K} exceeds the number of vertices {n}")
    return K


def node_dissimilarity(G: Graph, measure: str, **params) -> np.ndarray:
    return proximity.as_dissimilarity(proximity.compute(G, measure, **params)).matrix


def leading_eigenvectors(M, K: int, rule: str = "largest") -> np.ndarray:
    """``K`` eigenvectors of symmetric ``M`` as columns, sign-normalised.

    ``rule='largest'`` takes the largest ``|lambda|``; ``'smallest'`` the
    smallest algebraic eigenvalues. Each column is flipped so that its
    largest-magnitude entry is positive.
    """
    if rule not in EIG_RULES:
        raise ArgumentError(f"eigenvector rule must be one of {EIG_RULES}")
    w, V = numkernel.sym_eig(numkernel.symmetrize(M))
    if rule == "largest":
        order = np.argsort(-np.abs(w), kind="stable")[:K]
    else:
        order = np.arange(K)
    Z = V[:, order]
    peak = Z[np.argmax(np.abs(Z), axis=0), np.arange(Z.shape[1])]
    return Z * np.where(peak < 0, -1.0, 1.0)


def spectral_points(G: Graph, K: int, measure: str, eig: str = "largest", **params) -> np.ndarray:
    M = proximity.compute(G, measure, **params).matrix
    return leading_eigenvectors(M, K, eig)


def _cluster(D, K: int, clustering: str, gini_threshold: float) -> tuple[Partition, hierclust.Dendrogram]:
    dendro = hierclust.cluster(D, clustering, gini_threshold)
    return hierclust.cut(dendro, K), dendro


def detect_node(G, K, measure="ppmi", params=None, clustering="average", gini_threshold=0.3) -> Partition:
    """Cluster the node dissimilarity matrix; similarities pass through ``max(S) - S``."""
    G = check_graph(G)
    K = _check_k(K, G.n_vertices)
    D = node_dissimilarity(G, measure, **(params or {}))
    return _cluster(D, K, clustering, gini_threshold)[0]


def detect_spectral(
    G, K, measure="katz", params=None, clustering="ward", gini_threshold=0.3, eig="largest"
) -> Partition:
    """Cluster rows of the ``K`` leading eigenvectors of a similarity matrix."""
    G = check_graph(G)
    K = _check_k(K, G.n_vertices)
    Z = spectral_points(G, K, measure, eig, **(params or {}))
    return _cluster(numkernel.pairwise_euclidean(Z), K, clustering, gini_threshold)[0]


def detect_representation(
    G, K, method="deepwalk", config: TrainConfig | None = None, clustering="ward", gini_threshold=0.3
) -> Partition:
    """Cluster rows of a learned embedding."""
    G = check_graph(G)
    K = _check_k(K, G.n_vertices)
    Z = embed(G, method, config).vectors
    return _cluster(numkernel.pairwise_euclidean(Z), K, clustering, gini_threshold)[0]


class _PipelineEstimator(ClusterMixin, BaseEstimator):
    """Shared ``fit`` logic; subclasses provide ``_dissimilarity(G)``."""

    def fit(self, G, y=None):
        G = check_graph(G)
        K = _check_k(self.n_clusters, G.n_vertices)
        if self.linkage not in hierclust.METHODS:
            raise ArgumentError(f"unknown linkage {self.linkage!r}")
        t0 = time.perf_counter()
        D = self._dissimilarity(G)
        t1 = time.perf_counter()
        self.partition_, self.dendrogram_ = _cluster(D, K, self.linkage, self.gini_threshold)
        t2 = time.perf_counter()
        self.dissimilarity_ = D
        self.labels_ = self.partition_.labels
        self.model_time_ = t1 - t0
        self.clustering_time_ = t2 - t1
        return self

    def fit_predict(self, G, y=None):
        return self.fit(G).labels_

    def cut(self, K) -> Partition:
        """Re-cut the fitted dendrogram at a different community count."""
        return hierclust.cut(self.dendrogram_, K)


class NodeDissimilarityCommunities(_PipelineEstimator):
    """Hierarchical clustering of a node dissimilarity matrix.

    Parameters
    ----------
    n_clusters : int
    measure : str
        Any name accepted by :func:`commkit.proximity.compute`.
    linkage : {'single', 'complete', 'average', 'ward', 'ward_printed', 'genie'}
    gini_threshold : float
        Genie threshold.
    alpha, beta, k_steps, length, iters : optional
        Measure parameters; ignored by measures that do not use them.
    """

    def __init__(self, n_clusters=2, measure="ppmi", linkage="average", gini_threshold=0.3,
                 alpha=None, beta=None, k_steps=None, length=None, iters=None):
        self.n_clusters = n_clusters
        self.measure = measure
        self.linkage = linkage
        self.gini_threshold = gini_threshold
        self.alpha = alpha
        self.beta = beta
        self.k_steps = k_steps
        self.length = length
        self.iters = iters

    def _measure_params(self):
        return {k: getattr(self, k) for k in ("alpha", "beta", "k_steps", "length", "iters")}

    def _dissimilarity(self, G):
        return node_dissimilarity(G, self.measure, **self._measure_params())


class SpectralCommunities(NodeDissimilarityCommunities):
    """Hierarchical clustering of rows of the leading eigenvectors of a similarity matrix."""

    def __init__(self, n_clusters=2, measure="katz", linkage="ward", gini_threshold=0.3,
                 alpha=None, beta=None, k_steps=None, length=None, iters=None, eig="largest"):
        super().__init__(n_clusters, measure, linkage, gini_threshold, alpha, beta, k_steps, length, iters)
        self.eig = eig

    def _dissimilarity(self, G):
        Z = spectral_points(G, self.n_clusters, self.measure, self.eig, **self._measure_params())
        self.eigenvectors_ = Z
        return numkernel.pairwise_euclidean(Z)


class RepresentationCommunities(_PipelineEstimator):
    """Hierarchical clustering of learned node embeddings.

    Extra keyword arguments are :class:`~commkit.embedding.TrainConfig`
    fields (``epochs``, ``p``, ``q``, ``hidden``, ...).
    """

    def __init__(self, n_clusters=2, method="deepwalk", dim=6, linkage="ward", gini_threshold=0.3,
                 random_state=0, train_params=None):
        self.n_clusters = n_clusters
        self.method = method
        self.dim = dim
        self.linkage = linkage
        self.gini_threshold = gini_threshold
        self.random_state = random_state
        self.train_params = train_params

    def _dissimilarity(self, G):
        cfg = TrainConfig(dim=self.dim, seed=int(self.random_state or 0)).updated(**(self.train_params or {}))
        self.embedding_ = embed(G, canonical_method(self.method), cfg)
        return numkernel.pairwise_euclidean(self.embedding_.vectors)


@dataclass(frozen=True)
class PipelineSpec:
    """Declarative description of one pipeline configuration."""

    framework: str
    method: str
    clustering: str = "average"
    gini_threshold: float = 0.3
    params: dict = field(default_factory=dict)
    dim: int | None = None
    eig: str = "largest"

    def __post_init__(self):
        if self.framework not in FRAMEWORKS:
            raise ArgumentError(f"framework must be one of {FRAMEWORKS}, got {self.framework!r}")
        if self.clustering not in hierclust.METHODS:
            raise ArgumentError(f"unknown clustering {self.clustering!r}")
        if self.framework == "representation":
            canonical_method(self.method)
            if self.dim is None:
                object.__setattr__(self, "dim", 6)
        else:
            proximity.canonical_measure(self.method)
            if self.dim is not None:
                raise ArgumentError("dim applies to the representation framework only")

    def estimator(self, n_clusters: int, seed: int = 0):
        if self.framework == "node":
            return NodeDissimilarityCommunities(n_clusters, self.method, self.clustering,
                                                self.gini_threshold, **self.params)
        if self.framework == "spectral":
            return SpectralCommunities(n_clusters, self.method, self.clustering, self.gini_threshold,
                                       eig=self.eig, **self.params)
        return RepresentationCommunities(n_clusters, self.method, self.dim, self.clustering,
                                         self.gini_threshold, seed, dict(self.params))

    def label(self) -> str:
        bits = [self.framework, self.method, self.clustering]
        if self.clustering == "genie":
            bits.append(f"g={self.gini_threshold:g}")
        bits.extend(f"{k}={v}" for k, v in sorted(self.params.items()))
        if self.dim is not None:
            bits.append(f"dim={self.dim}")
        return " ".join(bits)


def run_pipeline(G: Graph, K: int, spec: PipelineSpec, seed: int = 0) -> Partition:
    return spec.estimator(K, seed).fit(G).partition_
