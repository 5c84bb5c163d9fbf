"""Binary checkpoint format.

Layout (little-endian)::

    magic        7 bytes  b"EPAAE1\\0"
    header_len   u64
    header       UTF-8 JSON {"config": ..., "vocab": ...}
    n_tensors    u32
    per tensor:  name_len u32, name bytes, rank u32, dims u64 * rank,
                 float32 data (C order)
"""

from __future__ import annotations

import io
import json
import struct
from pathlib import Path

import numpy as np

from ..autodiff import Tensor
from ..corpus import Vocab
from .config import ModelConfig
from .network import AutoEncoder, init_params

MAGIC = b"EPAAE1\0"


class CheckpointError(ValueError):
    pass


def to_bytes(model: AutoEncoder) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    header = json.dumps(
        {"config": model.config.to_dict(), "vocab": model.vocab.to_dict()}, sort_keys=True
    ).encode("utf-8")
    buf.write(struct.pack("<Q", len(header)))
    buf.write(header)
    buf.write(struct.pack("<I", len(model.params)))
    for name in sorted(model.params):
        arr = np.ascontiguousarray(model.params[name].data, dtype="<f4")
        raw_name = name.encode("utf-8")
        buf.write(struct.pack("<I", len(raw_name)))
        buf.write(raw_name)
        buf.write(struct.pack("<I", arr.ndim))
        buf.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        buf.write(arr.tobytes())
    return buf.getvalue()


def from_bytes(blob: bytes) -> AutoEncoder:
    view = memoryview(blob)
    if bytes(view[: len(MAGIC)]) != MAGIC:
        raise CheckpointError("not an EPAAE checkpoint (bad magic or version)")
    pos = len(MAGIC)

    def read(fmt: str):
        nonlocal pos
        size = struct.calcsize(fmt)
        if pos + size > len(view):
            raise CheckpointError("checkpoint truncated")
        values = struct.unpack_from(fmt, view, pos)
        pos += size
        return values

    try:
        (header_len,) = read("<Q")
        header = json.loads(bytes(view[pos : pos + header_len]).decode("utf-8"))
        pos += header_len
        config = ModelConfig.from_dict(header["config"])
        vocab = Vocab.from_dict(header["vocab"])
    except (ValueError, KeyError, TypeError) as exc:
        raise CheckpointError(f"bad checkpoint header: {exc}") from exc

    expected = init_params(config, len(vocab), np.random.default_rng(0))
    (count,) = read("<I")
    params: dict[str, Tensor] = {}
    dtype = np.dtype(config.dtype)
    for _ in range(count):
        (name_len,) = read("<I")
        name = bytes(view[pos : pos + name_len]).decode("utf-8")
        pos += name_len
        (rank,) = read("<I")
        shape = read(f"<{rank}Q")
        n = int(np.prod(shape, dtype=np.int64))
        if pos + 4 * n > len(view):
            raise CheckpointError("checkpoint truncated")
        data = np.frombuffer(view[pos : pos + 4 * n], dtype="<f4").reshape(shape)
        pos += 4 * n
        if name not in expected or expected[name].shape != tuple(shape):
            raise CheckpointError(f"tensor {name!r} with shape {tuple(shape)} does not fit the config")
        params[name] = Tensor(data.astype(dtype), requires_grad=True, dtype=dtype)
    missing = set(expected) - set(params)
    if missing:
        raise CheckpointError(f"checkpoint lacks tensors: {sorted(missing)}")
    if pos != len(view):
        raise CheckpointError("trailing bytes after last tensor")
    return AutoEncoder(config, vocab, params)


def save(model: AutoEncoder, path: str | Path) -> None:
    Path(path).write_bytes(to_bytes(model))


def load(path: str | Path) -> AutoEncoder:
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint: {exc}") from exc
    return from_bytes(blob)
