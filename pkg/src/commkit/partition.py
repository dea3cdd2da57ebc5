"""Flat partitions of a vertex set."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ArgumentError, GraphFormatError


def canonical_labels(labels) -> np.ndarray:
    """Relabel communities ``0..K-1`` in order of first occurrence."""
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ArgumentError("labels must be one-dimensional")
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inverse.ravel()]


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of vertices to nonempty communities labelled by first occurrence."""

    labels: np.ndarray

    def __post_init__(self):
        lab = canonical_labels(self.labels)
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @classmethod
    def from_communities(cls, communities, n: int | None = None) -> "Partition":
        communities = [list(c) for c in communities]
        if n is None:
            n = sum(len(c) for c in communities)
        labels = -np.ones(n, dtype=np.int64)
        for i, c in enumerate(communities):
            labels[c] = i
        if np.any(labels < 0):
            raise ArgumentError("communities do not cover every vertex")
        return cls(labels)

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def communities(self) -> list[list[int]]:
        return [np.flatnonzero(self.labels == c).tolist() for c in range(self.k)]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def relabel_vertices(self, perm) -> "Partition":
        """Partition of the relabelled graph in which vertex ``v`` became ``perm[v]``."""
        perm = np.asarray(perm)
        out = np.empty_like(self.labels)
        out[perm] = self.labels
        return Partition(out)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())

    def __repr__(self):
        return f"Partition(k={self.k}, labels={self.labels.tolist()})"


def dump_partition(part: Partition, fh) -> None:
    for v, c in enumerate(part.labels):
        fh.write(f"{v} {c}\n")


def load_partition(fh) -> Partition:
    """Read ``vertex_id community_id`` lines (``#`` comments allowed)."""
    pairs = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'vertex community', got {line!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer field in {line!r}") from None
    if not pairs:
        return Partition(np.empty(0, dtype=np.int64))
    n = max(v for v, _ in pairs) + 1
    labels = -np.ones(n, dtype=np.int64)
    for v, c in pairs:
        labels[v] = c
    if np.any(labels < 0):
        raise GraphFormatError("partition file does not cover every vertex")
    return Partition(labels)


def read_partition(path) -> Partition:
    with open(path, encoding="utf-8") as fh:
        return load_partition(fh)


def write_partition(part: Partition, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        dump_partition(part, fh)
