"""Node similarity and dissimilarity matrices.

Every measure takes a :class:`~commkit.graph.Graph` and returns a
:class:`ProximityMatrix`. Measures built from asymmetric intermediates
(K-step transitions, rooted PageRank, PPMI) are symmetrized as
``(M + M.T) / 2`` before they are returned, so downstream linkage and
eigendecomposition always see symmetric input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numkernel
from .exceptions import ArgumentError, DivergenceError, MethodUndefinedError
from .graph import Graph, transition_matrix

SIMILARITY = "similarity"
DISSIMILARITY = "dissimilarity"


@dataclass(frozen=True)
class ProximityMatrix:
    matrix: np.ndarray
    kind: str
    measure: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (SIMILARITY, DISSIMILARITY):
            raise ArgumentError(f"unknown proximity kind {self.kind!r}")
        M = np.asarray(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ArgumentError("proximity matrix must be square")
        if not np.all(np.isfinite(M)):
            raise MethodUndefinedError(f"{self.measure} produced non-finite values")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _neighbour_sets(G: Graph):
    return [set(nb.tolist()) for nb in G.neighbors]


def wasserman_faust(G: Graph) -> ProximityMatrix:
    """Structural-equivalence distance between adjacency rows.

    ``d[u, v] = sqrt(sum_{k != u, v} (A[u, k] - A[v, k])**2)``
    """
    A = G._adjacency.astype(float)
    # Full row distance, then remove the k=u and k=v terms, which are both A[u, v]**2.
    sq = np.sum(A * A, axis=1)
    full = sq[:, None] + sq[None, :] - 2.0 * (A @ A)
    masked = full - 2.0 * A * A
    D = np.sqrt(np.clip(np.rint(masked), 0.0, None))
    np.fill_diagonal(D, 0.0)
    return ProximityMatrix(D, DISSIMILARITY, "wasserman_faust")


def adamic_adar(G: Graph) -> ProximityMatrix:
    """Common neighbours weighted by ``2 / log|N(w)|``; degree-1 terms are skipped."""
    A = G._adjacency.astype(float)
    deg = G.degrees
    weight = np.zeros(G.n_vertices)
    ok = deg > 1
    weight[ok] = 2.0 / np.log(deg[ok])
    S = (A * weight[None, :]) @ A
    np.fill_diagonal(S, 0.0)
    return ProximityMatrix(S, SIMILARITY, "adamic_adar")


def overlap(G: Graph) -> ProximityMatrix:
    """Jaccard overlap of neighbourhoods (0 when both neighbourhoods are empty)."""
    A = G._adjacency.astype(float)
    deg = A.sum(axis=1)
    inter = A @ A
    union = deg[:, None] + deg[None, :] - inter
    S = np.divide(inter, union, out=np.zeros_like(inter), where=union > 0)
    return ProximityMatrix(S, SIMILARITY, "overlap")


def k_step(G: Graph, k_steps: int = 1) -> ProximityMatrix:
    """Symmetrized ``(D^-1 A)^K`` transition probabilities."""
    k_steps = int(k_steps)
    if k_steps < 1:
        raise ArgumentError("k_steps must be at least 1")
    P = transition_matrix(G)
    S = numkernel.matpow(P, k_steps)
    return ProximityMatrix(numkernel.symmetrize(S), SIMILARITY, "k_step", {"k_steps": k_steps})


def katz(G: Graph, beta: float = 0.1) -> ProximityMatrix:
    """Katz index ``beta (I - beta A)^-1 A``.

    Raises :class:`DivergenceError` when ``beta * rho(A) >= 1``.
    """
    beta = float(beta)
    if beta <= 0:
        raise ArgumentError("Katz decay beta must be positive")
    A = G._adjacency.astype(float)
    rho = numkernel.spectral_radius(A)
    if beta * rho >= 1.0:
        raise DivergenceError(
            f"Katz series diverges: beta*rho(A) = {beta:g}*{rho:.6g} = {beta * rho:.6g} >= 1 "
            f"(spectral radius rho(A) = {rho:.6g})"
        )
    n = G.n_vertices
    S = beta * numkernel.solve(np.eye(n) - beta * A, A)
    return ProximityMatrix(numkernel.symmetrize(S), SIMILARITY, "katz", {"beta": beta})


def rooted_pagerank(G: Graph, alpha: float = 0.3) -> ProximityMatrix:
    """Rooted PageRank ``(1 - alpha) (I - alpha P)^-1``, symmetrized."""
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise ArgumentError(f"rooted PageRank alpha must lie in [0, 1), got {alpha}")
    P = transition_matrix(G)
    S = (1.0 - alpha) * numkernel.inverse(np.eye(G.n_vertices) - alpha * P)
    return ProximityMatrix(numkernel.symmetrize(S), SIMILARITY, "rooted_pagerank", {"alpha": alpha})


def surfing_cooccurrence(G: Graph, alpha: float = 1.0, length: int = 10) -> np.ndarray:
    """Random-surfing co-occurrence ``R = sum_{k=1..L} p_k``.

    ``p_0 = I`` and ``p_k = alpha * p_{k-1} P + (1 - alpha) * p_0``: at each
    step the surfer continues along ``P = D^-1 A`` with probability ``alpha``
    and restarts at its root otherwise.
    """
    alpha = float(alpha)
    length = int(length)
    if not 0.0 < alpha <= 1.0:
        raise ArgumentError(f"continuation probability must lie in (0, 1], got {alpha}")
    if length < 1:
        raise ArgumentError("surfing length must be at least 1")
    P = transition_matrix(G)
    p0 = np.eye(G.n_vertices)
    p = p0
    R = np.zeros_like(P)
    for _ in range(length):
        p = alpha * (p @ P) + (1.0 - alpha) * p0
        R += p
    return R


def ppmi_from_cooccurrence(R) -> np.ndarray:
    """Positive pointwise mutual information of a co-occurrence matrix (unsymmetrized)."""
    R = np.asarray(R, dtype=float)
    total = R.sum()
    row = R.sum(axis=1)
    col = R.sum(axis=0)
    expected = np.outer(row, col)
    M = np.zeros_like(R)
    ok = (R > 0) & (expected > 0)
    M[ok] = np.log(R[ok] * total / expected[ok])
    return np.maximum(M, 0.0)


def ppmi(G: Graph, alpha: float = 1.0, length: int = 10) -> ProximityMatrix:
    """PPMI of random-surfing co-occurrences, symmetrized."""
    M = ppmi_from_cooccurrence(surfing_cooccurrence(G, alpha, length))
    return ProximityMatrix(
        numkernel.symmetrize(M), SIMILARITY, "ppmi", {"alpha": float(alpha), "length": int(length)}
    )


def blondel_gajardo(G: Graph, iters: int = 10) -> ProximityMatrix:
    """Self-similarity iteration ``S <- (A S A^T + A^T S A) / ||.||_F`` from all-ones."""
    iters = int(iters)
    if iters < 1:
        raise ArgumentError("Blondel-Gajardo needs at least one iteration")
    if G.n_vertices == 0:
        raise MethodUndefinedError("Blondel-Gajardo is undefined on the empty graph")
    A = G._adjacency.astype(float)
    S = np.ones_like(A)
    for _ in range(iters):
        T = A @ S @ A.T + A.T @ S @ A
        norm = np.linalg.norm(T)
        if norm == 0.0:
            raise MethodUndefinedError("Blondel-Gajardo iteration hit a zero matrix (no edges)")
        S = T / norm
    return ProximityMatrix(numkernel.symmetrize(S), SIMILARITY, "blondel_gajardo", {"iters": iters})


def to_dissimilarity(S: ProximityMatrix) -> ProximityMatrix:
    """Map a similarity to ``max(S) - S`` with a zero diagonal."""
    if S.kind != SIMILARITY:
        raise ArgumentError(f"expected a similarity matrix, got {S.kind}")
    M = S.matrix
    D = (M.max() if M.size else 0.0) - M
    D = numkernel.symmetrize(D)
    np.fill_diagonal(D, 0.0)
    return ProximityMatrix(np.maximum(D, 0.0), DISSIMILARITY, S.measure, dict(S.params))


def as_dissimilarity(P: ProximityMatrix) -> ProximityMatrix:
    return P if P.kind == DISSIMILARITY else to_dissimilarity(P)


# name -> (function, {cli/param name: function kwarg})
MEASURES: dict[str, tuple[Callable[..., ProximityMatrix], dict[str, str]]] = {
    "wasserman_faust": (wasserman_faust, {}),
    "adamic_adar": (adamic_adar, {}),
    "overlap": (overlap, {}),
    "k_step": (k_step, {"k_steps": "k_steps"}),
    "katz": (katz, {"beta": "beta"}),
    "rooted_pagerank": (rooted_pagerank, {"alpha": "alpha"}),
    "ppmi": (ppmi, {"alpha": "alpha", "length": "length"}),
    "blondel_gajardo": (blondel_gajardo, {"iters": "iters"}),
}

ALIASES = {
    "wf": "wasserman_faust",
    "w-f": "wasserman_faust",
    "aa": "adamic_adar",
    "jaccard": "overlap",
    "kstep": "k_step",
    "k-step": "k_step",
    "rpr": "rooted_pagerank",
    "bg": "blondel_gajardo",
}


def canonical_measure(name: str) -> str:
    key = name.lower().replace(" ", "_")
    key = ALIASES.get(key, key)
    if key not in MEASURES:
        raise ArgumentError(f"unknown measure {name!r}; choose from {sorted(MEASURES)}")
    return key


def compute(G: Graph, measure: str, **params) -> ProximityMatrix:
    """Compute ``measure`` on ``G``, ignoring parameters the measure does not take."""
    key = canonical_measure(measure)
    fn, accepted = MEASURES[key]
    kwargs = {accepted[k]: v for k, v in params.items() if k in accepted and v is not None}
    return fn(G, **kwargs)


def dump_matrix(M, fh) -> None:
    """Write a matrix as CSV with 17 significant digits."""
    for row in np.asarray(M, dtype=float):
        fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def load_matrix(fh) -> np.ndarray:
    rows = [[float(x) for x in line.split(",")] for line in fh if line.strip()]
    return np.array(rows, dtype=float)
