"""commkit: community detection by hierarchical clustering of node proximities."""

from . import baselines, benchgen, embedding, hierclust, metrics, numkernel, pipelines, proximity
from .baselines import GreedyModularity, LabelPropagation, Louvain
from .benchgen import LabeledGraph, SbmSpec, generate_sbm, load_builtin
from .exceptions import (
    ArgumentError,
    CommkitError,
    DivergenceError,
    GraphFormatError,
    MethodUndefinedError,
    NumericalError,
    TrainingError,
    ValidationError,
)
from .graph import Graph, load_edge_list, read_edge_list, write_edge_list
from .hierclust import Dendrogram, HierarchicalClustering
from .metrics import adjusted_rand, modularity
from .partition import Partition
from .pipelines import (
    NodeDissimilarityCommunities,
    PipelineSpec,
    RepresentationCommunities,
    SpectralCommunities,
    detect_node,
    detect_representation,
    detect_spectral,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "CommkitError",
    "Dendrogram",
    "DivergenceError",
    "Graph",
    "GraphFormatError",
    "GreedyModularity",
    "HierarchicalClustering",
    "LabelPropagation",
    "LabeledGraph",
    "Louvain",
    "MethodUndefinedError",
    "NodeDissimilarityCommunities",
    "NumericalError",
    "Partition",
    "PipelineSpec",
    "RepresentationCommunities",
    "SbmSpec",
    "SpectralCommunities",
    "TrainingError",
    "ValidationError",
    "adjusted_rand",
    "baselines",
    "benchgen",
    "detect_node",
    "detect_representation",
    "detect_spectral",
    "embedding",
    "generate_sbm",
    "hierclust",
    "load_builtin",
    "load_edge_list",
    "metrics",
    "modularity",
    "numkernel",
    "pipelines",
    "proximity",
    "read_edge_list",
    "write_edge_list",
]
