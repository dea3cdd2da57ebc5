"""Embedding container, training configuration and the text dump format."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

import numpy as np

from ..exceptions import ArgumentError, GraphFormatError, TrainingError


@dataclass(frozen=True, eq=False)
class Embedding:
    """Per-vertex vectors ``Z`` of shape ``(n, dim)``.

    ``train_log`` holds one loss value per epoch for gradient-trained
    methods. ``info`` carries method-specific by-products (eigenvalues,
    singular values, the HOPE target-side factor, ...).
    """

    vectors: np.ndarray
    method: str
    train_log: tuple = ()
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        Z = np.asarray(self.vectors, dtype=float)
        if Z.ndim != 2 or Z.shape[1] < 1:
            raise ArgumentError(f"embedding must be a 2-D array with dim >= 1, got shape {Z.shape}")
        if not np.all(np.isfinite(Z)):
            raise TrainingError(f"{self.method} produced non-finite embedding entries")
        object.__setattr__(self, "vectors", Z)
        object.__setattr__(self, "train_log", tuple(float(x) for x in self.train_log))

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class TrainConfig:
    """Hyper-parameters shared by the embedding methods.

    ``None`` for ``epochs``, ``learning_rate`` or ``hidden`` selects the
    method-specific default (see :meth:`resolved`).
    """

    dim: int = 6
    seed: int = 0
    epochs: int | None = None
    learning_rate: float | None = None
    # random walks / skip-gram
    walks_per_vertex: int = 10
    walk_length: int = 40
    window: int = 5
    negatives: int = 5
    p: float = 1.0
    q: float = 1.0
    # graph factorisation
    lambda_reg: float = 1e-4
    # DNGR
    hidden: int | None = None
    noise_prob: float = 0.1
    ppmi_alpha: float = 0.98
    ppmi_length: int = 10
    activation: str = "sigmoid"
    # GraRep / HOPE
    grarep_order: int = 3
    hope_measure: str = "katz"
    hope_beta: float = 0.1
    hope_alpha: float = 0.3

    def __post_init__(self):
        for name in ("dim", "walks_per_vertex", "walk_length", "window", "grarep_order", "ppmi_length"):
            if int(getattr(self, name)) < 1:
                raise ArgumentError(f"{name} must be a positive integer")
        if self.negatives < 0:
            raise ArgumentError("negatives must be nonnegative")
        if self.epochs is not None and self.epochs < 0:
            raise ArgumentError("epochs must be nonnegative")
        if self.p <= 0 or self.q <= 0:
            raise ArgumentError("node2vec p and q must be positive")
        if not 0.0 <= self.noise_prob < 1.0:
            raise ArgumentError("noise_prob must lie in [0, 1)")
        if self.lambda_reg < 0:
            raise ArgumentError("lambda_reg must be nonnegative")
        if self.learning_rate is not None and self.learning_rate <= 0:
            raise ArgumentError("learning_rate must be positive")

    def resolved(self, method: str) -> "TrainConfig":
        sgns = method in ("deepwalk", "node2vec", "skipgram")
        epochs = self.epochs if self.epochs is not None else (5 if sgns else 200)
        lr = self.learning_rate if self.learning_rate is not None else (0.025 if sgns else 0.01)
        hidden = self.hidden if self.hidden is not None else max(2 * self.dim, 32)
        return replace(self, epochs=epochs, learning_rate=lr, hidden=hidden)

    def updated(self, **overrides) -> "TrainConfig":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ArgumentError(f"unknown training options: {sorted(unknown)}")
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def check_finite_loss(loss: float, method: str, epoch: int) -> float:
    if not np.isfinite(loss):
        raise TrainingError(f"{method}: loss became non-finite at epoch {epoch}")
    return float(loss)


def dump_embedding(emb: Embedding, fh) -> None:
    """Header ``n d`` then one whitespace-separated row per vertex."""
    fh.write(f"{emb.n} {emb.dim}\n")
    for row in emb.vectors:
        fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def load_embedding(fh, method: str = "loaded") -> Embedding:
    lines = [line for line in fh if line.strip()]
    if not lines:
        raise GraphFormatError("empty embedding file")
    try:
        n, d = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphFormatError(f"bad embedding header {lines[0].strip()!r}") from None
    rows = [[float(x) for x in line.split()] for line in lines[1:]]
    Z = np.array(rows, dtype=float).reshape(-1, d) if rows else np.empty((0, d))
    if Z.shape != (n, d):
        raise GraphFormatError(f"header says {n}x{d}, body has shape {Z.shape}")
    return Embedding(Z, method)
