"""Mini-batch training with adaptive-moment gradient descent."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError, NumericError
from ..tokenizer import Vocabulary
from .network import loss_and_grads
from .params import ModelParameters
from .pipeline import encode_example

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def train(params: ModelParameters, dataset, vocab: Vocabulary, *,
          epochs: int = 30, batch_size: int = 16, learning_rate: float = 1e-3,
          log=None) -> tuple[ModelParameters, list[float]]:
    """Fit ``params`` in place on a labeled dataset; returns (params, loss history).

    The dataset must contain both classes. Examples are encoded once up
    front; epoch shuffles come from a generator seeded with the model
    config's seed, so the loss history is reproducible bit for bit.
    ``log``, when given, receives one line per epoch.
    """
    if epochs < 1 or batch_size < 1:
        raise InvalidInputError("epochs and batch_size must be positive")
    if learning_rate <= 0:
        raise InvalidInputError("learning_rate must be positive")
    examples = list(dataset)
    if not examples:
        raise InvalidInputError("training dataset is empty")
    labels = np.asarray([ex.label for ex in examples], dtype=np.int64)
    if len(set(labels.tolist())) < 2:
        raise InvalidInputError("training dataset must contain both classes")

    encoded = [encode_example(ex, vocab, params.config) for ex in examples]
    ids = np.asarray([s.ids for s in encoded], dtype=np.int64)
    mask = np.asarray([s.mask for s in encoded], dtype=np.float64)
    dep = np.asarray([s.dep_ids for s in encoded], dtype=np.int64)
    n = len(examples)

    rng = np.random.default_rng(params.config.seed)
    m_state = {name: np.zeros_like(arr) for name, arr in params.items()}
    v_state = {name: np.zeros_like(arr) for name, arr in params.items()}
    t = 0
    history: list[float] = []

    for epoch in range(epochs):
        order = rng.permutation(n)
        total = 0.0
        for batch_index, start in enumerate(range(0, n, batch_size)):
            batch = order[start:start + batch_size]
            try:
                loss, grads = loss_and_grads(params, ids[batch], mask[batch],
                                             dep[batch], labels[batch])
            except NumericError as exc:
                raise NumericError(
                    f"{exc} (epoch {epoch}, batch {batch_index})"
                ) from exc
            if not np.isfinite(loss):
                raise NumericError(f"non-finite loss at epoch {epoch}, batch {batch_index}")
            t += 1
            correction1 = 1.0 - ADAM_BETA1 ** t
            correction2 = 1.0 - ADAM_BETA2 ** t
            for name in params.names():
                g = grads[name]
                m = m_state[name]
                v = v_state[name]
                m *= ADAM_BETA1
                m += (1.0 - ADAM_BETA1) * g
                v *= ADAM_BETA2
                v += (1.0 - ADAM_BETA2) * g * g
                params[name] -= learning_rate * (m / correction1) / (
                    np.sqrt(v / correction2) + ADAM_EPS
                )
            params.check_finite(f"epoch {epoch}, batch {batch_index}")
            total += loss * len(batch)
        history.append(total / n)
        if log is not None:
            log(f"epoch {epoch + 1}/{epochs}: mean loss {history[-1]:.6f}")
    return params, history
