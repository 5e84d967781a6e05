"""Learnable tensors of the encoder and classification head."""

from __future__ import annotations

from typing import Iterator

import numpy as np

from ..errors import ConfigurationError, NumericError
from .config import ModelConfig

N_CLASSES = 2


def expected_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    """Canonical tensor name -> shape map; the order is the checkpoint order."""
    d, f = config.d_model, config.d_ff
    shapes: dict[str, tuple[int, ...]] = {
        "tok_emb": (config.vocab_size, d),
        "pos_emb": (config.seq_len, d),
        "tag_emb": (config.tagset_size, d),
    }
    for i in range(config.n_layers):
        p = f"layer{i}."
        shapes[p + "attn.Wq"] = (d, d)
        shapes[p + "attn.bq"] = (d,)
        shapes[p + "attn.Wk"] = (d, d)
        shapes[p + "attn.bk"] = (d,)
        shapes[p + "attn.Wv"] = (d, d)
        shapes[p + "attn.bv"] = (d,)
        shapes[p + "attn.Wo"] = (d, d)
        shapes[p + "attn.bo"] = (d,)
        shapes[p + "ln1.g"] = (d,)
        shapes[p + "ln1.b"] = (d,)
        shapes[p + "ff.W1"] = (d, f)
        shapes[p + "ff.b1"] = (f,)
        shapes[p + "ff.W2"] = (f, d)
        shapes[p + "ff.b2"] = (d,)
        shapes[p + "ln2.g"] = (d,)
        shapes[p + "ln2.b"] = (d,)
    shapes["head.W"] = (d, N_CLASSES)
    shapes["head.b"] = (N_CLASSES,)
    return shapes


class ModelParameters:
    """Name-addressable collection of float64 arrays plus their config."""

    def __init__(self, tensors: dict[str, np.ndarray], config: ModelConfig):
        expected = expected_shapes(config)
        if list(tensors) != list(expected):
            raise ConfigurationError("tensor names do not match the declared layout")
        for name, shape in expected.items():
            if tensors[name].shape != shape:
                raise ConfigurationError(
                    f"tensor {name} has shape {tensors[name].shape}, expected {shape}"
                )
        self._tensors = tensors
        self.config = config

    def __getitem__(self, name: str) -> np.ndarray:
        return self._tensors[name]

    def __setitem__(self, name: str, value: np.ndarray) -> None:
        current = self._tensors[name]
        if value.shape != current.shape:
            raise ConfigurationError(
                f"tensor {name} has shape {current.shape}, got {value.shape}"
            )
        self._tensors[name] = value

    def names(self) -> list[str]:
        return list(self._tensors)

    def items(self) -> Iterator[tuple[str, np.ndarray]]:
        return iter(self._tensors.items())

    def copy(self) -> "ModelParameters":
        return ModelParameters({n: a.copy() for n, a in self._tensors.items()}, self.config)

    def check_finite(self, context: str = "") -> None:
        for name, arr in self._tensors.items():
            if not np.all(np.isfinite(arr)):
                suffix = f" ({context})" if context else ""
                raise NumericError(f"non-finite values in tensor {name}{suffix}")

    def equals(self, other: "ModelParameters") -> bool:
        return self.config == other.config and all(
            np.array_equal(self._tensors[n], other._tensors[n]) for n in self._tensors
        )


def init_params(config: ModelConfig) -> ModelParameters:
    """Seeded initialization.

    Embeddings and projection matrices are uniform in +-1/sqrt(d_model);
    biases start at zero, layer-norm scales at one, and the classification
    head entirely at zero so a fresh model emits (0, 0) logits.
    """
    rng = np.random.default_rng(config.seed)
    scale = 1.0 / np.sqrt(config.d_model)
    tensors: dict[str, np.ndarray] = {}
    for name, shape in expected_shapes(config).items():
        leaf = name.rsplit(".", 1)[-1]
        if name.startswith("head."):
            tensors[name] = np.zeros(shape)
        elif leaf in ("g",):
            tensors[name] = np.ones(shape)
        elif leaf.startswith("b"):
            tensors[name] = np.zeros(shape)
        else:
            tensors[name] = rng.uniform(-scale, scale, size=shape)
    return ModelParameters(tensors, config)
