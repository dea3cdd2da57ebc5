"""Closed-form and gradient-based matrix factorisation embeddings.

Laplacian Eigenmaps, GraRep and HOPE are deterministic decompositions;
Graph Factorisation is trained with plain SGD over the edge list.
"""

from __future__ import annotations

import numpy as np

from .. import numkernel, proximity
from .._validation import check_random_state
from ..exceptions import ArgumentError, MethodUndefinedError
from ..graph import Graph, laplacian, transition_matrix
from .base import Embedding, TrainConfig, check_finite_loss


def _orthonormal_complement(u: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of unit vector ``u``."""
    n = u.size
    Q, _ = np.linalg.qr(np.column_stack([u, np.eye(n)]))
    return Q[:, 1:n]


def _localized_basis(V: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(V) whose k-th vector concentrates on a pivot vertex.

    Pivots are chosen greedily by largest residual row norm (column-pivoted
    QR of ``V.T``); the basis is the polar factor of ``V`` mapped onto the
    pivot rows.
    """
    R = V.copy()
    piv = []
    for _ in range(V.shape[1]):
        norms = np.einsum("ij,ij->i", R, R)
        j = int(np.argmax(norms))
        piv.append(j)
        q = R[j] / np.sqrt(norms[j])
        R -= np.outer(R @ q, q)
    U, _, Wt = np.linalg.svd(V[piv].T)
    return V @ (U @ Wt)


def _canonical_eigenbasis(w: np.ndarray, Y: np.ndarray, dim: int, tol: float = 1e-8) -> np.ndarray:
    """First ``dim`` eigenvector columns with degenerate eigenspaces made canonical.

    LAPACK returns an arbitrary basis of a repeated eigenvalue's eigenspace,
    so a cut through such a space would depend on the BLAS build. Every
    eigenspace that reaches into the first ``dim`` columns is replaced by
    its localized basis.
    """
    out = []
    start = 0
    while start < dim:
        stop = start + 1
        while stop < w.size and abs(w[stop] - w[start]) <= tol * max(1.0, abs(w[start])):
            stop += 1
        block = Y[:, start:stop]
        if stop - start > 1:
            block = _localized_basis(block)
        out.append(block[:, : dim - start])
        start = stop
    return np.hstack(out)[:, :dim]


def laplacian_eigenmaps(G: Graph, dim: int) -> Embedding:
    """Minimise ``tr(Z^T L Z)`` subject to ``Z^T D Z = I``, trivial solution removed.

    Solved through the normalised Laplacian ``D^-1/2 L D^-1/2`` restricted
    to the complement of ``D^1/2 1``, so the constant generalised
    eigenvector is excluded even when the graph is disconnected.
    """
    n = G.n_vertices
    dim = int(dim)
    if not 1 <= dim < n:
        raise ArgumentError(f"Laplacian Eigenmaps needs 1 <= dim < n, got dim={dim}, n={n}")
    deg = G.degrees.astype(float)
    if np.any(deg == 0):
        raise MethodUndefinedError("Laplacian Eigenmaps is undefined with isolated vertices")
    s = 1.0 / np.sqrt(deg)
    N = laplacian(G) * s[:, None] * s[None, :]
    u0 = np.sqrt(deg) / np.sqrt(deg.sum())
    B = _orthonormal_complement(u0)
    w, V = numkernel.sym_eig(numkernel.symmetrize(B.T @ N @ B))
    Y = _canonical_eigenbasis(w, B @ V, dim)
    Z = Y * s[:, None]
    # fix the sign of each column for reproducibility
    Z *= np.where(Z[np.argmax(np.abs(Z), axis=0), np.arange(dim)] < 0, -1.0, 1.0)
    return Embedding(Z, "laplacian_eigenmaps", info={"eigenvalues": w[:dim]})


def gf_loss(Z: np.ndarray, edges: np.ndarray, lambda_reg: float) -> float:
    """``1/2 sum_E (1 - <Z_i, Z_j>)^2 + lambda/2 ||Z||_F^2``."""
    if len(edges):
        r = 1.0 - np.einsum("ij,ij->i", Z[edges[:, 0]], Z[edges[:, 1]])
        fit = 0.5 * float(r @ r)
    else:
        fit = 0.0
    return fit + 0.5 * lambda_reg * float(np.sum(Z * Z))


def gf_gradient(Z: np.ndarray, edges: np.ndarray, lambda_reg: float) -> np.ndarray:
    grad = lambda_reg * Z.copy()
    if len(edges):
        i, j = edges[:, 0], edges[:, 1]
        r = 1.0 - np.einsum("ij,ij->i", Z[i], Z[j])
        np.add.at(grad, i, -r[:, None] * Z[j])
        np.add.at(grad, j, -r[:, None] * Z[i])
    return grad


def graph_factorisation(G: Graph, config: TrainConfig | None = None) -> Embedding:
    """Fit ``<Z_i, Z_j> ~ A_ij`` on edges by SGD.

    Each epoch visits the edges in random order. The L2 penalty of vertex
    ``i`` is spread over its ``deg(i)`` edge updates so one epoch applies the
    full-gradient penalty once; isolated vertices are shrunk once per epoch.
    """
    cfg = (config or TrainConfig()).resolved("graph_factorisation")
    rng = check_random_state(cfg.seed)
    n, d, lam, lr = G.n_vertices, cfg.dim, cfg.lambda_reg, cfg.learning_rate
    edges = G.edge_array
    deg = G.degrees.astype(float)
    share = np.divide(lam, deg, out=np.zeros(n), where=deg > 0)
    isolated = deg == 0
    Z = rng.normal(scale=0.1, size=(n, d))
    log = []
    for epoch in range(cfg.epochs):
        for e in rng.permutation(len(edges)):
            i, j = edges[e]
            zi, zj = Z[i].copy(), Z[j]
            r = 1.0 - zi @ zj
            Z[i] -= lr * (-r * zj + share[i] * zi)
            Z[j] -= lr * (-r * zi + share[j] * Z[j])
        Z[isolated] *= 1.0 - lr * lam
        log.append(check_finite_loss(gf_loss(Z, edges, lam), "graph_factorisation", epoch))
    return Embedding(Z, "graph_factorisation", log)


def grarep_allocation(dim: int, order: int) -> list[int]:
    base, rem = divmod(int(dim), int(order))
    return [base + (rem if k == 0 else 0) for k in range(order)]


def grarep(G: Graph, dim: int, order: int = 3) -> Embedding:
    """Concatenated SVD factors of log-shifted k-step transition matrices, k=1..order.

    For each k, ``X_k[i, j] = max(0, log(T^k[i, j] / sum_p T^k[p, j]) - log(1/n))``
    and the block ``U_k sqrt(s_k)`` of its rank-``d_k`` SVD is kept.
    """
    order = int(order)
    if order < 1:
        raise ArgumentError("GraRep order must be at least 1")
    n = G.n_vertices
    T = transition_matrix(G)
    Tk = np.eye(n)
    blocks, sigmas = [], []
    for k, dk in enumerate(grarep_allocation(dim, order), start=1):
        Tk = Tk @ T
        if dk == 0:
            continue
        colsum = Tk.sum(axis=0)
        X = np.zeros_like(Tk)
        ok = (Tk > 0) & (colsum[None, :] > 0)
        ratio = np.divide(Tk, colsum[None, :], out=np.ones_like(Tk), where=colsum[None, :] > 0)
        X[ok] = np.log(ratio[ok]) - np.log(1.0 / n)
        X = np.maximum(X, 0.0)
        U, s, _ = numkernel.truncated_svd(X, min(dk, n))
        W = U * np.sqrt(s)[None, :]
        if W.shape[1] < dk:
            W = np.hstack([W, np.zeros((n, dk - W.shape[1]))])
        blocks.append(W)
        sigmas.append(s)
    return Embedding(np.hstack(blocks), "grarep", info={"singular_values": sigmas})


HOPE_MEASURES = ("katz", "adamic_adar", "rooted_pagerank", "overlap")


def hope(G: Graph, dim: int, measure: str = "katz", **params) -> Embedding:
    """Source-side factor ``U sqrt(s)`` of the rank-``dim`` SVD of a proximity matrix.

    The target-side factor ``V sqrt(s)`` is kept in ``info['target']``; the
    source/target inner products ``Z_s Z_t^T`` are the best rank-``dim``
    approximation of the proximity matrix.
    """
    key = proximity.canonical_measure(measure)
    if key not in HOPE_MEASURES:
        raise ArgumentError(f"HOPE supports {HOPE_MEASURES}, got {measure!r}")
    S = proximity.compute(G, key, **params).matrix
    U, s, V = numkernel.truncated_svd(S, int(dim))
    root = np.sqrt(s)[None, :]
    return Embedding(
        U * root,
        "hope",
        info={"target": V * root, "singular_values": s, "measure": key},
    )
