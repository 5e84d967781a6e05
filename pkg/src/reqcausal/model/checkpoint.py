"""Binary checkpoint serialization.

Layout: magic ``CIRA``, format version (u32 LE), length-prefixed JSON config
block, then every tensor in the declared order, each as a u32 rank, u64
dimensions, and little-endian float64 data. Loading reproduces the saved
parameters bit for bit.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import (
    CheckpointFormatError,
    CheckpointShapeError,
    CheckpointTruncatedError,
    CheckpointVersionError,
    ConfigurationError,
)
from .config import ModelConfig
from .params import ModelParameters, expected_shapes

MAGIC = b"CIRA"
FORMAT_VERSION = 1


def save_checkpoint(params: ModelParameters, path: str | Path) -> None:
    config_blob = json.dumps(params.config.to_dict(), sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<I", len(config_blob)))
        fh.write(config_blob)
        for _, arr in params.items():
            fh.write(struct.pack("<I", arr.ndim))
            for dim in arr.shape:
                fh.write(struct.pack("<Q", dim))
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


class _Reader:
    def __init__(self, data: bytes, path):
        self.data = data
        self.offset = 0
        self.path = path

    def take(self, count: int) -> bytes:
        if self.offset + count > len(self.data):
            raise CheckpointTruncatedError(
                f"checkpoint {self.path} ends early (needed {count} bytes at offset {self.offset})"
            )
        chunk = self.data[self.offset:self.offset + count]
        self.offset += count
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]


def load_checkpoint(path: str | Path) -> ModelParameters:
    """Read a checkpoint; the returned parameters carry their own config."""
    reader = _Reader(Path(path).read_bytes(), path)
    if reader.take(4) != MAGIC:
        raise CheckpointFormatError(f"{path} is not a checkpoint (bad magic bytes)")
    version = reader.u32()
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(
            f"{path} uses format version {version}; this build reads version {FORMAT_VERSION}"
        )
    config_blob = reader.take(reader.u32())
    try:
        config = ModelConfig.from_dict(json.loads(config_blob.decode("utf-8")))
    except (ValueError, TypeError, ConfigurationError) as exc:
        raise CheckpointFormatError(f"{path} has an unreadable config block: {exc}") from exc

    tensors: dict[str, np.ndarray] = {}
    for name, shape in expected_shapes(config).items():
        ndim = reader.u32()
        dims = tuple(reader.u64() for _ in range(ndim))
        if dims != shape:
            raise CheckpointShapeError(
                f"{path}: tensor {name} has shape {dims}, config implies {shape}"
            )
        count = int(np.prod(shape, dtype=np.int64)) if shape else 1
        raw = reader.take(count * 8)
        tensors[name] = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
    if reader.offset != len(reader.data):
        raise CheckpointFormatError(f"{path} has trailing bytes after the last tensor")
    return ModelParameters(tensors, config)
