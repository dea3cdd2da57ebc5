"""Input checks shared by the estimators."""

from __future__ import annotations

import os

import numpy as np

from .exceptions import ArgumentError
from .graph import Graph

SEED_ENV = "COMMKIT_SEED"


def default_seed() -> int:
    """Global default seed, overridable through ``COMMKIT_SEED``."""
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ArgumentError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def check_random_state(seed) -> np.random.Generator:
    """Turn ``seed`` into a PCG64 ``Generator``.

    ``None`` falls back to :func:`default_seed` so that every run is
    reproducible unless the caller passes a generator explicitly.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = default_seed()
    if isinstance(seed, (int, np.integer)):
        return np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    raise ArgumentError(f"cannot build a random generator from {seed!r}")


def check_graph(G) -> Graph:
    if isinstance(G, Graph):
        return G
    A = np.asarray(G)
    if A.ndim == 2 and A.shape[0] == A.shape[1]:
        return Graph.from_adjacency(A)
    raise ArgumentError(f"expected a Graph or a square adjacency matrix, got {type(G).__name__}")


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ArgumentError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ArgumentError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
