import numpy as np
import pytest

from commkit import Graph, Partition


def path3():
    return Graph(3, [(0, 1), (1, 2)])


def triangle():
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


def edge():
    return Graph(2, [(0, 1)])


def two_triangles():
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def random_graph(n, p, rng, connected_min_degree=False):
    """Erdos-Renyi graph; optionally patch isolated vertices with one edge."""
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    edges = set(zip(iu[keep].tolist(), ju[keep].tolist()))
    if connected_min_degree:
        deg = np.zeros(n, int)
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        for u in np.flatnonzero(deg == 0):
            v = (int(u) + 1) % n
            edges.add((min(u, v), max(u, v)))
    return Graph(n, edges)


@pytest.fixture
def P3():
    return path3()


@pytest.fixture
def K3():
    return triangle()


@pytest.fixture
def K2():
    return edge()


@pytest.fixture
def TwoK3():
    return two_triangles()


@pytest.fixture
def two_k3_truth():
    return Partition([0, 0, 0, 1, 1, 1])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
