"""Agglomerative clustering on a precomputed dissimilarity matrix.

Merge rules: single, complete and average linkage; classical Ward
(``'ward'``), which merges the pair with the smallest increase in the
within-cluster sum of squares

    dESS(Cm, Cn) = W(Cm u Cn) - W(Cm) - W(Cn),  W(S) = 1/|S| * sum_{s<t in S} d(s, t)**2

and reports the scipy-compatible height ``sqrt(2 dESS)``; the set
sum-of-squares criterion ``'ward_printed'``

    D(Cm, Cn) = 1 / (|Cm| |Cn|) * sum_{s, t in Cm u Cn} d(s, t)**2

summed over ordered pairs; and Genie, i.e. single linkage that only merges
a smallest cluster whenever the Gini index of cluster sizes exceeds a
threshold.

Cluster ids follow the scipy convention: leaves are ``0..n-1`` and the
cluster created by merge ``i`` gets id ``n + i``. Ties are broken by the
lexicographically smallest ``(a, b)`` id pair with ``a < b``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from . import numkernel
from .exceptions import ArgumentError, ValidationError
from .partition import Partition

LINKAGES = ("single", "complete", "average", "ward", "ward_printed")
METHODS = LINKAGES + ("genie",)


@dataclass(frozen=True)
class Dendrogram:
    """Merge history: rows ``(a, b, value, new_id)`` in merge order."""

    merges: tuple
    n_leaves: int

    def __post_init__(self):
        if len(self.merges) != max(self.n_leaves - 1, 0):
            raise ValidationError(f"expected {self.n_leaves - 1} merges, got {len(self.merges)}")

    def cut(self, k: int) -> Partition:
        return cut(self, k)

    def to_scipy(self) -> np.ndarray:
        """scipy-style ``(n-1, 4)`` linkage matrix (values need not be monotone)."""
        size = np.ones(2 * self.n_leaves - 1)
        Z = np.zeros((len(self.merges), 4))
        for i, (a, b, value, new) in enumerate(self.merges):
            size[new] = size[a] + size[b]
            Z[i] = (a, b, value, size[new])
        return Z


def check_dissimilarity(D, tol: float = 1e-10) -> np.ndarray:
    """Validate a dissimilarity matrix and return it as a float array."""
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ArgumentError("dissimilarity matrix must be square")
    if not np.all(np.isfinite(D)):
        raise ArgumentError("dissimilarity matrix contains NaN or Inf")
    if np.any(D < -tol):
        raise ArgumentError("dissimilarity matrix has negative entries")
    if not numkernel.is_symmetric(D, tol):
        raise ArgumentError("dissimilarity matrix is not symmetric")
    if np.any(np.abs(np.diag(D)) > tol):
        raise ArgumentError("dissimilarity matrix must have a zero diagonal")
    return D


def gini_index(sizes) -> float:
    """Normalised Gini index of cluster sizes, in ``[0, 1)``."""
    c = np.asarray(sizes, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ArgumentError("gini_index needs a nonempty 1-D sequence of sizes")
    if np.any(c <= 0):
        raise ArgumentError("cluster sizes must be positive")
    k = c.size
    if k == 1:
        return 0.0
    c = np.sort(c)[::-1]
    i = np.arange(1, k + 1)
    return float(np.sum((k - 2 * i + 1) * c) / ((k - 1) * c.sum()))


def ward_increase(w_union, w_a, w_b, n_a, n_b):
    """Twice the Ward sum-of-squares increase, from ordered-pair sums of squared dissimilarities."""
    return w_union / (n_a + n_b) - w_a / n_a - w_b / n_b


class _Agglomerator:
    """Incremental cluster-distance bookkeeping indexed by cluster id."""

    def __init__(self, D: np.ndarray, method: str):
        n = D.shape[0]
        m = 2 * n - 1
        self.n = n
        self.method = method
        self.size = np.zeros(m, dtype=np.int64)
        self.size[:n] = 1
        self.active = np.zeros(m, dtype=bool)
        self.active[:n] = True
        # crit[i, j], i < j, holds the linkage value of active clusters; inf elsewhere
        self.crit = np.full((m, m), np.inf)
        iu = np.triu_indices(n, 1)
        if method in ("single", "complete", "genie"):
            self.crit[iu] = D[iu]
        elif method == "average":
            self.cross = np.zeros((m, m))
            self.cross[:n, :n] = D
            self.crit[iu] = D[iu]
        else:
            # within[c]: sum of squared dissimilarities over ordered pairs inside c
            self.cross = np.zeros((m, m))
            self.cross[:n, :n] = D * D
            self.within = np.zeros(m)
            self.crit[iu] = (1.0 if method == "ward" else 2.0) * D[iu] ** 2

    def best_pair(self, restrict_to=None) -> tuple[int, int]:
        crit = self.crit
        if restrict_to is not None:
            allowed = np.zeros(len(self.size), dtype=bool)
            allowed[restrict_to] = True
            crit = np.where(allowed[:, None] | allowed[None, :], crit, np.inf)
        flat = int(np.argmin(crit))
        return divmod(flat, crit.shape[1])

    def merge(self, a: int, b: int, new: int) -> float:
        value = float(self.crit[a, b])
        self.size[new] = self.size[a] + self.size[b]
        self.active[[a, b]] = False
        others = np.flatnonzero(self.active)
        self.active[new] = True
        meth = self.method
        if meth in ("single", "genie", "complete"):
            va = np.where(others < a, self.crit[others, a], self.crit[a, others])
            vb = np.where(others < b, self.crit[others, b], self.crit[b, others])
            vals = np.minimum(va, vb) if meth != "complete" else np.maximum(va, vb)
        elif meth == "average":
            s = self.cross[others, a] + self.cross[others, b]
            self.cross[others, new] = s
            self.cross[new, others] = s
            vals = s / (self.size[others] * self.size[new])
        else:
            self.within[new] = self.within[a] + self.within[b] + 2.0 * self.cross[a, b]
            s = self.cross[others, a] + self.cross[others, b]
            self.cross[others, new] = s
            self.cross[new, others] = s
            union = self.within[others] + self.within[new] + 2.0 * s
            if meth == "ward":
                vals = ward_increase(union, self.within[others], self.within[new],
                                     self.size[others], self.size[new])
            else:
                vals = union / (self.size[others] * self.size[new])
        self.crit[a, :] = np.inf
        self.crit[:, a] = np.inf
        self.crit[b, :] = np.inf
        self.crit[:, b] = np.inf
        self.crit[others, new] = vals
        if meth == "ward":
            # report sqrt(2 dESS), signed in case a non-Euclidean D makes it negative
            return float(np.sign(value) * np.sqrt(abs(value)))
        return value


def _agglomerate(D, method: str, gini_threshold: float | None = None) -> Dendrogram:
    D = check_dissimilarity(D)
    n = D.shape[0]
    if n == 0:
        raise ArgumentError("cannot cluster an empty set")
    agg = _Agglomerator(D, method)
    merges = []
    for step in range(n - 1):
        restrict = None
        if method == "genie":
            active = np.flatnonzero(agg.active)
            sizes = agg.size[active]
            if gini_index(sizes) > gini_threshold:
                restrict = active[sizes == sizes.min()]
        a, b = agg.best_pair(restrict)
        new = n + step
        value = agg.merge(a, b, new)
        merges.append((a, b, value, new))
    return Dendrogram(tuple(merges), n)


def linkage_cluster(D, method: str = "average") -> Dendrogram:
    """Agglomerate with ``method`` in :data:`LINKAGES`."""
    if method not in LINKAGES:
        raise ArgumentError(f"unknown linkage {method!r}; choose from {LINKAGES}")
    return _agglomerate(D, method)


def genie_cluster(D, gini_threshold: float = 0.3) -> Dendrogram:
    """Gini-constrained single linkage."""
    g = float(gini_threshold)
    if not 0.0 < g <= 1.0:
        raise ArgumentError(f"Gini threshold must lie in (0, 1], got {g}")
    return _agglomerate(D, "genie", g)


def cluster(D, method: str, gini_threshold: float = 0.3) -> Dendrogram:
    if method == "genie":
        return genie_cluster(D, gini_threshold)
    return linkage_cluster(D, method)


def cut(dendrogram: Dendrogram, k: int) -> Partition:
    """Flat partition with ``k`` communities: undo the last ``k - 1`` merges."""
    n = dendrogram.n_leaves
    k = int(k)
    if not 1 <= k <= n:
        raise ArgumentError(f"K={k} outside [1, {n}]")
    parent = np.arange(2 * n - 1)
    for a, b, _, new in dendrogram.merges[: n - k]:
        parent[a] = new
        parent[b] = new

    def root(x):
        while parent[x] != x:
            x = parent[x]
        return x

    return Partition(np.array([root(v) for v in range(n)]))


def dump_dendrogram(dendrogram: Dendrogram, fh) -> None:
    for a, b, value, new in dendrogram.merges:
        fh.write(f"{a} {b} {value:.17g} {new}\n")


def load_dendrogram(fh) -> Dendrogram:
    merges = []
    for line in fh:
        if not line.strip():
            continue
        a, b, value, new = line.split()
        merges.append((int(a), int(b), float(value), int(new)))
    return Dendrogram(tuple(merges), len(merges) + 1)


class HierarchicalClustering(ClusterMixin, BaseEstimator):
    """Agglomerative clustering estimator.

    Parameters
    ----------
    n_clusters : int, default=2
        Number of clusters to cut the dendrogram at.
    linkage : {'single', 'complete', 'average', 'ward', 'ward_printed', 'genie'}, default='average'
    gini_threshold : float, default=0.3
        Genie only; Gini index above which only smallest clusters may merge.
    metric : {'precomputed', 'euclidean'}, default='precomputed'
        With 'precomputed', ``fit`` expects a square dissimilarity matrix;
        otherwise rows of ``X`` are points.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
    dendrogram_ : Dendrogram
    """

    def __init__(self, n_clusters=2, linkage="average", gini_threshold=0.3, metric="precomputed"):
        self.n_clusters = n_clusters
        self.linkage = linkage
        self.gini_threshold = gini_threshold
        self.metric = metric

    def fit(self, X, y=None):
        if self.linkage not in METHODS:
            raise ArgumentError(f"unknown linkage {self.linkage!r}; choose from {METHODS}")
        if self.metric == "precomputed":
            D = X
        elif self.metric == "euclidean":
            D = numkernel.pairwise_euclidean(X)
        else:
            raise ArgumentError(f"unknown metric {self.metric!r}")
        self.dendrogram_ = cluster(D, self.linkage, self.gini_threshold)
        self.n_leaves_ = self.dendrogram_.n_leaves
        self.labels_ = cut(self.dendrogram_, self.n_clusters).labels
        return self
