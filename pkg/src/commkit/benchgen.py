"""Stochastic block model benchmarks and bundled real-world graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from importlib import resources
from typing import Iterator

import numpy as np

from ._validation import check_random_state
from .exceptions import ArgumentError
from .graph import Graph, load_edge_list
from .partition import Partition, load_partition

GRID_CLUSTERS = (3, 4, 5, 10)
GRID_CLUSTER_SIZES = (5, 10, 20)
GRID_P_IN = (0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
GRID_P_OUT = (0.05, 0.1, 0.2, 0.3)
GRID_SEEDS_PER_CELL = 10


@dataclass(frozen=True)
class SbmSpec:
    n_clusters: int
    vertices_per_cluster: int
    p_in: float
    p_out: float
    seed: int = 0

    def __post_init__(self):
        if self.n_clusters < 1 or self.vertices_per_cluster < 1:
            raise ArgumentError("SBM block counts and sizes must be positive")
        for p in (self.p_in, self.p_out):
            if not 0.0 <= p <= 1.0:
                raise ArgumentError(f"edge probability {p} outside [0, 1]")

    @property
    def n_vertices(self) -> int:
        return self.n_clusters * self.vertices_per_cluster

    @property
    def graph_id(self) -> str:
        return (
            f"sbm_c{self.n_clusters}_v{self.vertices_per_cluster}"
            f"_in{self.p_in:g}_out{self.p_out:g}_s{self.seed}"
        )


@dataclass(frozen=True)
class LabeledGraph:
    graph: Graph
    ground_truth: Partition
    name: str = ""


def generate_sbm(spec: SbmSpec) -> LabeledGraph:
    """Sample a planted-partition graph; every vertex pair is an independent coin flip."""
    rng = check_random_state(spec.seed)
    n = spec.n_vertices
    blocks = np.repeat(np.arange(spec.n_clusters), spec.vertices_per_cluster)
    iu, ju = np.triu_indices(n, 1)
    same = blocks[iu] == blocks[ju]
    prob = np.where(same, spec.p_in, spec.p_out)
    keep = rng.random(iu.size) < prob
    G = Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))
    return LabeledGraph(G, Partition(blocks), spec.graph_id)


def grid_seed(ci: int, vi: int, pi: int, oi: int, rep: int) -> int:
    """Injective seed from grid coordinates (indices into the grid axes)."""
    return ((((ci * len(GRID_CLUSTER_SIZES) + vi) * len(GRID_P_IN) + pi) * len(GRID_P_OUT) + oi)
            * GRID_SEEDS_PER_CELL + rep)


def benchmark_grid(seeds_per_cell: int = GRID_SEEDS_PER_CELL) -> Iterator[SbmSpec]:
    """Cross product of the benchmark grid axes, ``seeds_per_cell`` graphs per cell."""
    if not 1 <= seeds_per_cell <= GRID_SEEDS_PER_CELL:
        raise ArgumentError(f"seeds_per_cell must lie in [1, {GRID_SEEDS_PER_CELL}]")
    axes = (GRID_CLUSTERS, GRID_CLUSTER_SIZES, GRID_P_IN, GRID_P_OUT)
    for idx in itertools.product(*(range(len(a)) for a in axes)):
        c, v, pin, pout = (a[i] for a, i in zip(axes, idx))
        for rep in range(seeds_per_cell):
            yield SbmSpec(c, v, pin, pout, grid_seed(*idx, rep))


def small_grid() -> Iterator[SbmSpec]:
    """One graph per grid cell."""
    return benchmark_grid(seeds_per_cell=1)


BUILTINS = ("karate", "dolphins")


def _read_data(name: str) -> str:
    return resources.files("commkit").joinpath("data", name).read_text(encoding="utf-8")


def load_builtin(name: str):
    """Bundled dataset.

    ``karate`` returns a :class:`LabeledGraph` with the two-faction split.
    ``dolphins`` has no agreed partition and returns a bare :class:`Graph`.
    """
    key = name.lower()
    if key == "karate":
        G = load_edge_list(_read_data("karate.txt"))
        truth = load_partition(_read_data("karate.truth").splitlines())
        return LabeledGraph(G, truth, "karate")
    if key == "dolphins":
        return load_edge_list(_read_data("dolphins.txt"))
    raise ArgumentError(f"unknown dataset {name!r}; choose from {BUILTINS}")
