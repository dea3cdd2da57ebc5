"""Undirected simple graphs and their dense matrix views.

Vertex ids are the contiguous integers ``0..n_vertices-1``. Edges are stored
as sorted ``(u, v)`` tuples with ``u < v``. All matrix views are dense numpy
arrays, since the graphs handled here have at most a few hundred vertices.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np

from .exceptions import GraphFormatError, ValidationError

_HEADER = re.compile(r"^#\s*vertices\s*:\s*(\S+)\s*$")


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    Parameters
    ----------
    n_vertices : int
        Number of vertices; ids are ``0..n_vertices-1``. Isolated vertices
        are allowed.
    edges : iterable of (int, int)
        Unordered vertex pairs. Reversed duplicates collapse to one edge.
        Self-loops and out-of-range ids raise :class:`ValidationError`.
    """

    n_vertices: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = int(self.n_vertices)
        if n < 0:
            raise ValidationError(f"n_vertices must be nonnegative, got {n}")
        canon = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) out of range for n_vertices={n}")
            canon.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "n_vertices", n)
        object.__setattr__(self, "edges", frozenset(canon))

    @classmethod
    def from_adjacency(cls, A) -> "Graph":
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValidationError("adjacency matrix must be square")
        if not np.array_equal(A, A.T):
            raise ValidationError("adjacency matrix must be symmetric")
        if np.any(np.diag(A) != 0):
            raise ValidationError("adjacency matrix must have a zero diagonal")
        iu, ju = np.nonzero(np.triu(A, 1))
        return cls(A.shape[0], zip(iu.tolist(), ju.tolist()))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n_vertices == other.n_vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.n_vertices, self.edges))

    def __repr__(self):
        return f"Graph(n_vertices={self.n_vertices}, n_edges={self.n_edges})"

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Edges as a sorted ``(m, 2)`` integer array."""
        if not self.edges:
            return np.empty((0, 2), dtype=np.int64)
        return np.array(sorted(self.edges), dtype=np.int64)

    @cached_property
    def _adjacency(self) -> np.ndarray:
        A = np.zeros((self.n_vertices, self.n_vertices), dtype=np.int64)
        e = self.edge_array
        A[e[:, 0], e[:, 1]] = 1
        A[e[:, 1], e[:, 0]] = 1
        A.setflags(write=False)
        return A

    @cached_property
    def degrees(self) -> np.ndarray:
        d = self._adjacency.sum(axis=1)
        d.setflags(write=False)
        return d

    @cached_property
    def neighbors(self) -> tuple:
        """Sorted neighbour arrays, one per vertex."""
        return tuple(np.flatnonzero(row) for row in self._adjacency)

    def relabel(self, perm) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        perm = np.asarray(perm)
        return Graph(self.n_vertices, ((perm[u], perm[v]) for u, v in self.edges))


def adjacency(G: Graph) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix (a fresh, writable copy)."""
    return G._adjacency.copy()


def degree_matrix(G: Graph) -> np.ndarray:
    return np.diag(G.degrees).astype(np.int64)


def laplacian(G: Graph) -> np.ndarray:
    """Combinatorial Laplacian ``L = D - A``."""
    return degree_matrix(G) - G._adjacency


def transition_matrix(G: Graph) -> np.ndarray:
    """Row-stochastic random-walk matrix ``D^-1 A``.

    Raises
    ------
    MethodUndefinedError
        If some vertex is isolated.
    """
    from .exceptions import MethodUndefinedError

    deg = G.degrees
    if np.any(deg == 0):
        iso = int(np.flatnonzero(deg == 0)[0])
        raise MethodUndefinedError(f"vertex {iso} is isolated; D^-1 A is undefined")
    return G._adjacency / deg[:, None]


def load_edge_list(stream: TextIO | str | Iterable[str]) -> Graph:
    """Parse the plain-text edge-list format.

    One edge per line as two whitespace-separated nonnegative integers.
    Blank lines and lines starting with ``#`` are ignored, except an optional
    ``# vertices: N`` header which fixes the vertex count.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    header_n = None
    edges = []
    max_id = -1
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER.match(line)
            if m:
                try:
                    header_n = int(m.group(1))
                except ValueError:
                    raise GraphFormatError(f"line {lineno}: bad vertex count {m.group(1)!r}") from None
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"line {lineno}: expected two nonnegative integers, got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise ValidationError(f"self-loop at line {lineno}")
        edges.append((u, v))
        max_id = max(max_id, u, v)
    n = max_id + 1
    if header_n is not None:
        if header_n < n:
            raise ValidationError(f"header declares {header_n} vertices but id {max_id} appears")
        n = header_n
    return Graph(n, edges)


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh)


def serialize_edge_list(G: Graph) -> str:
    lines = [f"# vertices: {G.n_vertices}"]
    lines.extend(f"{u} {v}" for u, v in sorted(G.edges))
    return "\n".join(lines) + "\n"


def write_edge_list(G: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_edge_list(G))


def connected_components(G: Graph) -> np.ndarray:
    """Component label per vertex, labels ordered by first occurrence."""
    labels = -np.ones(G.n_vertices, dtype=np.int64)
    nbrs = G.neighbors
    c = 0
    for s in range(G.n_vertices):
        if labels[s] >= 0:
            continue
        labels[s] = c
        stack = [s]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if labels[w] < 0:
                    labels[w] = c
                    stack.append(w)
        c += 1
    return labels
