"""Graph representation learning."""

from __future__ import annotations

from dataclasses import fields

from sklearn.base import BaseEstimator, TransformerMixin

from .._validation import check_graph
from ..exceptions import ArgumentError
from .base import Embedding, TrainConfig, dump_embedding, load_embedding
from .dngr import dngr
from .factorization import graph_factorisation, grarep, hope, laplacian_eigenmaps
from .skipgram import deepwalk, node2vec, skipgram_train
from .walks import WalkCorpus, generate_walks

METHODS = (
    "laplacian_eigenmaps",
    "graph_factorisation",
    "grarep",
    "hope",
    "deepwalk",
    "node2vec",
    "dngr",
)

_ALIASES = {
    "le": "laplacian_eigenmaps",
    "laplacianeigenmaps": "laplacian_eigenmaps",
    "gf": "graph_factorisation",
    "graph_factorization": "graph_factorisation",
    "graphfactorisation": "graph_factorisation",
}


def canonical_method(name: str) -> str:
    key = name.lower().replace("-", "_")
    key = _ALIASES.get(key, key)
    if key not in METHODS:
        raise ArgumentError(f"unknown embedding method {name!r}; choose from {METHODS}")
    return key


def embed(G, method: str, config: TrainConfig | None = None) -> Embedding:
    """Dispatch to an embedding method using the fields of ``config``."""
    G = check_graph(G)
    cfg = config or TrainConfig()
    key = canonical_method(method)
    if key == "laplacian_eigenmaps":
        return laplacian_eigenmaps(G, cfg.dim)
    if key == "grarep":
        return grarep(G, cfg.dim, cfg.grarep_order)
    if key == "hope":
        params = {"beta": cfg.hope_beta, "alpha": cfg.hope_alpha}
        return hope(G, cfg.dim, cfg.hope_measure, **params)
    return {
        "graph_factorisation": graph_factorisation,
        "deepwalk": deepwalk,
        "node2vec": node2vec,
        "dngr": dngr,
    }[key](G, cfg)


_CONFIG_FIELDS = tuple(f.name for f in fields(TrainConfig))


class GraphEmbedding(TransformerMixin, BaseEstimator):
    """Estimator front end: ``fit(G)`` learns ``embedding_``; ``transform`` returns it.

    Every :class:`TrainConfig` field is accepted as a keyword (``dim``,
    ``seed``, ``epochs``, ``p``, ``q``, ...); ``None`` keeps the default.
    """

    def __init__(self, method="deepwalk", dim=6, seed=0, **config):
        self.method = method
        self.dim = dim
        self.seed = seed
        unknown = set(config) - set(_CONFIG_FIELDS)
        if unknown:
            raise ArgumentError(f"unknown training options: {sorted(unknown)}")
        self.config = config

    def get_params(self, deep=True):
        return {"method": self.method, "dim": self.dim, "seed": self.seed, "config": dict(self.config)}

    def set_params(self, **params):
        for key, value in params.items():
            if key in ("method", "dim", "seed"):
                setattr(self, key, value)
            elif key == "config":
                self.config = dict(value)
            elif key in _CONFIG_FIELDS:
                self.config[key] = value
            else:
                raise ArgumentError(f"invalid parameter {key!r}")
        return self

    def train_config(self) -> TrainConfig:
        return TrainConfig(dim=self.dim, seed=self.seed).updated(**self.config)

    def fit(self, G, y=None):
        self.embedding_ = embed(G, self.method, self.train_config())
        return self

    def transform(self, G):
        """Return the fitted vectors; ``G`` must have the fitted vertex count."""
        if not hasattr(self, "embedding_"):
            from sklearn.exceptions import NotFittedError

            raise NotFittedError("GraphEmbedding is not fitted yet")
        if check_graph(G).n_vertices != self.embedding_.n:
            raise ArgumentError("transform expects the graph passed to fit")
        return self.embedding_.vectors


__all__ = [
    "Embedding",
    "GraphEmbedding",
    "METHODS",
    "TrainConfig",
    "WalkCorpus",
    "canonical_method",
    "deepwalk",
    "dngr",
    "dump_embedding",
    "embed",
    "generate_walks",
    "graph_factorisation",
    "grarep",
    "hope",
    "laplacian_eigenmaps",
    "load_embedding",
    "node2vec",
    "skipgram_train",
]
