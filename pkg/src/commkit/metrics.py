"""Partition quality: adjusted Rand index, modularity, cluster densities."""

from __future__ import annotations

import numpy as np

from .exceptions import ArgumentError, MethodUndefinedError
from .graph import Graph
from .partition import Partition


def _labels(p) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else np.asarray(p)


def confusion_matrix(reference, found) -> np.ndarray:
    """``m[u, v]`` = vertices in reference cluster ``u`` assigned to found community ``v``."""
    ref = _labels(reference)
    got = _labels(found)
    if ref.shape != got.shape:
        raise ArgumentError(f"partition sizes differ: {ref.size} vs {got.size}")
    _, r = np.unique(ref, return_inverse=True)
    _, c = np.unique(got, return_inverse=True)
    M = np.zeros((r.max() + 1 if r.size else 0, c.max() + 1 if c.size else 0), dtype=np.int64)
    np.add.at(M, (r.ravel(), c.ravel()), 1)
    return M


def _pairs(x):
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


def adjusted_rand(reference, found) -> float:
    """Hubert-Arabie adjusted Rand index from the confusion matrix.

    Returns 1.0 for identical partitions (up to relabelling), including the
    degenerate cases in which the chance correction has a zero denominator.
    """
    M = confusion_matrix(reference, found)
    n = int(M.sum())
    total = int(_pairs(n))
    cells = int(_pairs(M).sum())
    rows = int(_pairs(M.sum(axis=1)).sum())
    cols = int(_pairs(M.sum(axis=0)).sum())
    # exact integers: numerator and denominator both doubled to clear the 1/2
    num = 2 * (total * cells - rows * cols)
    den = total * (rows + cols) - 2 * rows * cols
    if den == 0:
        return 1.0
    return num / den


def modularity(G: Graph, partition) -> float:
    """Newman-Girvan modularity with the configuration-model null ``k_i k_j / 2m``."""
    labels = _labels(partition)
    if labels.shape != (G.n_vertices,):
        raise ArgumentError("partition does not match the graph's vertex count")
    m = G.n_edges
    if m == 0:
        raise MethodUndefinedError("modularity is undefined on a graph without edges")
    deg = G.degrees.astype(float)
    e = G.edge_array
    # sum over ordered pairs of A_ij delta: each intra edge counted twice
    intra = 2.0 * np.count_nonzero(labels[e[:, 0]] == labels[e[:, 1]])
    _, inv = np.unique(labels, return_inverse=True)
    tot = np.bincount(inv.ravel(), weights=deg)
    return float(intra / (2.0 * m) - np.sum(tot * tot) / (4.0 * m * m))


def _subset_mask(G: Graph, subset) -> np.ndarray:
    idx = np.unique(np.asarray(list(subset), dtype=np.int64))
    if idx.size == 0:
        raise MethodUndefinedError("density of an empty subset is undefined")
    if idx.min() < 0 or idx.max() >= G.n_vertices:
        raise ArgumentError("subset contains vertices outside the graph")
    mask = np.zeros(G.n_vertices, dtype=bool)
    mask[idx] = True
    return mask


def intra_density(G: Graph, subset) -> float:
    """Internal edges of the induced subgraph over ``C(n_H, 2)``."""
    mask = _subset_mask(G, subset)
    nh = int(mask.sum())
    if nh < 2:
        raise MethodUndefinedError("intra-cluster density needs at least two vertices")
    e = G.edge_array
    internal = np.count_nonzero(mask[e[:, 0]] & mask[e[:, 1]])
    return internal / (nh * (nh - 1) / 2)


def inter_density(G: Graph, subset) -> float:
    """Edges leaving the subset over ``n_H (n - n_H)``."""
    mask = _subset_mask(G, subset)
    nh = int(mask.sum())
    if nh >= G.n_vertices:
        raise MethodUndefinedError("inter-cluster density needs a proper subset")
    e = G.edge_array
    crossing = np.count_nonzero(mask[e[:, 0]] != mask[e[:, 1]])
    return crossing / (nh * (G.n_vertices - nh))
