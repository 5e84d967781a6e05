import numpy as np
import pytest

import reqcausal as rc

TOY_SENTENCES = [
    "if the user enters a password the system rejects it",
    "the app shows a menu",
    "when the server stops the device sends an alert",
    "the report is stored",
]


@pytest.fixture(scope="session")
def toy_vocab() -> rc.Vocabulary:
    return rc.build_vocab(TOY_SENTENCES, min_freq=1)


@pytest.fixture(scope="session")
def tiny_config(toy_vocab) -> rc.ModelConfig:
    return rc.ModelConfig(
        vocab_size=len(toy_vocab), seq_len=16, d_model=8, n_heads=2,
        n_layers=1, d_ff=16, seed=7,
    )


@pytest.fixture()
def tiny_params(tiny_config) -> rc.ModelParameters:
    return rc.init_params(tiny_config)


@pytest.fixture()
def probed_params(tiny_params) -> rc.ModelParameters:
    """Tiny params with a non-zero head so gradients reach every tensor."""
    rng = np.random.default_rng(3)
    tiny_params["head.W"][:] = rng.normal(0.0, 0.5, tiny_params["head.W"].shape)
    tiny_params["head.b"][:] = rng.normal(0.0, 0.1, tiny_params["head.b"].shape)
    return tiny_params
