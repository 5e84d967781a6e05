"""Model hyperparameters."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from ..errors import ConfigurationError
from ..syntax import SUM_EMBEDDING, TAGSET_SIZE, resolve_enrichment_mode
from ..tokenizer import DEFAULT_SEQ_LEN

# Desk-scale training length; serving keeps the tokenizer default of 384.
DESK_SEQ_LEN = 64


@dataclass(frozen=True)
class ModelConfig:
    """Dimensions, seed, and enrichment mode of one encoder instance."""

    vocab_size: int
    seq_len: int = DEFAULT_SEQ_LEN
    d_model: int = 64
    n_heads: int = 4
    n_layers: int = 2
    d_ff: int = 256
    tagset_size: int = TAGSET_SIZE
    seed: int = 0
    enrichment_mode: str = SUM_EMBEDDING

    def __post_init__(self) -> None:
        for name in ("vocab_size", "seq_len", "d_model", "n_heads", "n_layers", "d_ff", "tagset_size"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
        if self.d_model % self.n_heads != 0:
            raise ConfigurationError(
                f"d_model ({self.d_model}) must be divisible by n_heads ({self.n_heads})"
            )
        if not isinstance(self.seed, int):
            raise ConfigurationError(f"seed must be an integer, got {self.seed!r}")
        object.__setattr__(self, "enrichment_mode", resolve_enrichment_mode(self.enrichment_mode))

    @property
    def head_dim(self) -> int:
        return self.d_model // self.n_heads

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


def desk_scale_config(vocab_size: int, **overrides) -> ModelConfig:
    """CPU-trainable default: 2 layers, 4 heads, width 64, length 64."""
    base = dict(
        vocab_size=vocab_size,
        seq_len=DESK_SEQ_LEN,
        d_model=64,
        n_heads=4,
        n_layers=2,
        d_ff=256,
    )
    base.update(overrides)
    return ModelConfig(**base)
