"""Random-walk corpora for DeepWalk (uniform) and Node2Vec (second-order biased)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import ArgumentError
from ..graph import Graph


@dataclass(frozen=True)
class WalkCorpus:
    walks: tuple
    walks_per_vertex: int
    walk_length: int
    seed: int
    n_vertices: int

    def token_counts(self) -> np.ndarray:
        counts = np.zeros(self.n_vertices, dtype=np.int64)
        for w in self.walks:
            np.add.at(counts, w, 1)
        return counts


def _root_stream(seed: int, root: int) -> np.random.Generator:
    # one independent stream per root vertex, so output does not depend on scheduling
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(root),)))


def _walk(G: Graph, root: int, length: int, rng, p: float, q: float, biased: bool) -> np.ndarray:
    nbrs = G.neighbors
    A = G._adjacency
    walk = [root]
    prev = -1
    cur = root
    while len(walk) < length:
        cand = nbrs[cur]
        if len(cand) == 0:
            break
        if biased and prev >= 0:
            w = np.where(cand == prev, 1.0 / p, np.where(A[prev, cand] == 1, 1.0, 1.0 / q))
            nxt = cand[rng.choice(len(cand), p=w / w.sum())]
        else:
            nxt = cand[rng.integers(len(cand))]
        walk.append(int(nxt))
        prev, cur = cur, int(nxt)
    return np.array(walk, dtype=np.int64)


def generate_walks(
    G: Graph,
    walks_per_vertex: int = 10,
    walk_length: int = 40,
    mode: str = "uniform",
    p: float = 1.0,
    q: float = 1.0,
    seed: int = 0,
) -> WalkCorpus:
    """``walks_per_vertex`` walks of ``walk_length`` vertices from every root.

    ``mode='node2vec'`` weights the next step by ``1/p`` for returning to the
    previous vertex, ``1`` for a neighbour of the previous vertex and ``1/q``
    otherwise. Walks stop early only at isolated vertices.
    """
    if walk_length < 1:
        raise ArgumentError("walk_length must be at least 1")
    if walks_per_vertex < 1:
        raise ArgumentError("walks_per_vertex must be at least 1")
    if mode not in ("uniform", "node2vec"):
        raise ArgumentError(f"unknown walk mode {mode!r}")
    if p <= 0 or q <= 0:
        raise ArgumentError("p and q must be positive")
    biased = mode == "node2vec"
    walks = []
    for root in range(G.n_vertices):
        rng = _root_stream(seed, root)
        for _ in range(walks_per_vertex):
            walks.append(_walk(G, root, walk_length, rng, p, q, biased))
    return WalkCorpus(tuple(walks), walks_per_vertex, walk_length, int(seed), G.n_vertices)
