"""Weight file format.

Layout: magic ``GSTR``, u16 format version, u32 header length, JSON header
(UTF-8), then the parameter tensors as raw little-endian float32 in header
order. The header pins the architecture, the class order, the input
normalization convention, the creation seed, and every tensor's name and
shape, so a loader can reject mismatched or corrupted files before touching
the payload.

Saving the same model twice produces byte-identical files.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..landmarks import CLASS_ORDER
from .config import Architecture, ConvSpec
from .model import GestureNet, parameter_shapes

MAGIC = b"GSTR"
FORMAT_VERSION = 1
NORMALIZATION_TAG = "minmax-0-255"


class WeightsError(Exception):
    """Base error for weight file problems."""


class WeightFormatError(WeightsError):
    """Not a weight file, or an unsupported version."""


class WeightCorruptionError(WeightsError):
    """Structurally a weight file, but internally inconsistent or truncated."""


class ClassOrderError(WeightsError):
    """The file's class order does not match this build's frozen class order."""


def _arch_to_header(arch: Architecture) -> dict:
    return {
        "input_shape": list(arch.input_shape),
        "conv": [
            {"filters": s.filters, "kernel": s.kernel, "pool": s.pool} for s in arch.conv
        ],
        "hidden": arch.hidden,
        "classes": arch.classes,
    }


def _arch_from_header(obj: dict) -> Architecture:
    try:
        return Architecture(
            input_shape=tuple(obj["input_shape"]),
            conv=tuple(
                ConvSpec(int(c["filters"]), int(c["kernel"]), bool(c["pool"]))
                for c in obj["conv"]
            ),
            hidden=int(obj["hidden"]),
            classes=int(obj["classes"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise WeightFormatError(f"invalid architecture header: {exc}") from None


def save_weights(model: GestureNet, path) -> None:
    """Write the model to a weight file (tensors stored as float32)."""
    shapes = parameter_shapes(model.architecture)
    header = {
        "architecture": _arch_to_header(model.architecture),
        "class_order": list(CLASS_ORDER),
        "normalization": NORMALIZATION_TAG,
        "seed": model.created_seed,
        "tensors": [{"name": n, "shape": list(s)} for n, s in shapes.items()],
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<HI", FORMAT_VERSION, len(header_bytes))
    blob += header_bytes
    for name in shapes:
        blob += np.ascontiguousarray(model.params[name], dtype="<f4").tobytes()
    Path(path).write_bytes(bytes(blob))


def load_weights(path, *, dtype=np.float32) -> GestureNet:
    """Read a weight file back into a model, validating every declared shape."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise WeightFormatError(f"{path}: cannot read weight file: {exc}") from exc

    if len(data) < 10 or data[:4] != MAGIC:
        raise WeightFormatError(f"{path}: not a weight file (bad magic)")
    version, header_len = struct.unpack_from("<HI", data, 4)
    if version != FORMAT_VERSION:
        raise WeightFormatError(
            f"{path}: unsupported format version {version} (expected {FORMAT_VERSION})"
        )
    header_end = 10 + header_len
    if len(data) < header_end:
        raise WeightCorruptionError(f"{path}: truncated header")
    try:
        header = json.loads(data[10:header_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise WeightCorruptionError(f"{path}: unreadable header: {exc}") from None

    for field in ("architecture", "class_order", "normalization", "seed", "tensors"):
        if field not in header:
            raise WeightFormatError(f"{path}: header missing {field!r}")
    if header["class_order"] != list(CLASS_ORDER):
        raise ClassOrderError(
            f"{path}: class order {header['class_order']} does not match "
            f"this build's {list(CLASS_ORDER)}"
        )
    if header["normalization"] != NORMALIZATION_TAG:
        raise WeightFormatError(
            f"{path}: unknown normalization convention {header['normalization']!r}"
        )

    arch = _arch_from_header(header["architecture"])
    expected = parameter_shapes(arch)
    declared = header["tensors"]
    if [t.get("name") for t in declared] != list(expected):
        raise WeightCorruptionError(
            f"{path}: tensor list {[t.get('name') for t in declared]} does not "
            f"match the declared architecture"
        )

    params: dict[str, np.ndarray] = {}
    offset = header_end
    for entry in declared:
        name = entry["name"]
        shape = tuple(int(d) for d in entry["shape"])
        if shape != expected[name]:
            raise WeightCorruptionError(
                f"{path}: tensor {name} declared {shape}, architecture implies {expected[name]}"
            )
        nbytes = int(np.prod(shape)) * 4
        if offset + nbytes > len(data):
            raise WeightCorruptionError(f"{path}: truncated at tensor {name}")
        params[name] = (
            np.frombuffer(data, dtype="<f4", count=int(np.prod(shape)), offset=offset)
            .reshape(shape)
            .copy()
        )
        offset += nbytes
    if offset != len(data):
        raise WeightCorruptionError(f"{path}: {len(data) - offset} trailing bytes")

    model = GestureNet.from_params(arch, params, dtype=dtype)
    model.created_seed = int(header["seed"])
    return model
