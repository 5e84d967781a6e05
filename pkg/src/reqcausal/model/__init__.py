"""Trainable transformer encoder with a softmax classification head."""

from .checkpoint import FORMAT_VERSION, MAGIC, load_checkpoint, save_checkpoint
from .config import DESK_SEQ_LEN, ModelConfig, desk_scale_config
from .network import (
    cross_entropy,
    forward,
    gradient_check,
    loss_and_grads,
    softmax,
    spread_indices,
)
from .params import ModelParameters, expected_shapes, init_params
from .pipeline import (
    CAUSAL,
    LABEL_NAMES,
    NON_CAUSAL,
    Prediction,
    TextClassifier,
    classify,
    encode_example,
    encode_input,
    prediction_from_probabilities,
)
from .training import train

__all__ = [
    "CAUSAL",
    "DESK_SEQ_LEN",
    "FORMAT_VERSION",
    "LABEL_NAMES",
    "MAGIC",
    "ModelConfig",
    "ModelParameters",
    "NON_CAUSAL",
    "Prediction",
    "TextClassifier",
    "classify",
    "cross_entropy",
    "desk_scale_config",
    "encode_example",
    "encode_input",
    "expected_shapes",
    "forward",
    "gradient_check",
    "init_params",
    "load_checkpoint",
    "loss_and_grads",
    "prediction_from_probabilities",
    "save_checkpoint",
    "softmax",
    "spread_indices",
    "train",
]
