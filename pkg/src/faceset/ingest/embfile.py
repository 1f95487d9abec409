"""EMB1: the interchange file for embedding and probability matrices.

Layout (all integers little-endian):

    magic  "EMB1" (4 bytes)
    u32    version = 1
    u32    N rows
    u32    D columns (feature width or class count)
    u8     normalized flag (0/1)
    u8     kind: 0 = features, 1 = probabilities
    u16    reserved = 0
    f32    N*D values, row-major
    u32    metadata length
    bytes  UTF-8 JSON: {"ids": [...], "face_found": [...]}

Values are stored as 32-bit floats and widened to 64-bit on load, so a
load/store cycle preserves the payload bit-for-bit.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..data import ClassProbabilitySet, EmbeddingSet
from ..errors import FormatError, IoError

MAGIC = b"EMB1"
VERSION = 1
KIND_FEATURES = 0
KIND_PROBABILITIES = 1
_HEADER = struct.Struct("<4sIIIBBH")
_META_LEN = struct.Struct("<I")

AnySet = Union[EmbeddingSet, ClassProbabilitySet]


def write_embeddings(dataset: AnySet, path: str | Path) -> None:
    """Serialize a feature or probability set to an EMB1 file.

    The in-memory float64 matrix is rounded to float32 on disk; values
    that originated as float32 survive unchanged.
    """
    if isinstance(dataset, EmbeddingSet):
        kind = KIND_FEATURES
        normalized = 1 if dataset.normalized else 0
        face_found = [bool(x) for x in dataset.face_found]
    elif isinstance(dataset, ClassProbabilitySet):
        kind = KIND_PROBABILITIES
        normalized = 0
        face_found = [True] * dataset.n
    else:
        raise FormatError(f"cannot serialize {type(dataset).__name__}")
    n, dim = dataset.matrix.shape
    meta = json.dumps(
        {"ids": list(dataset.ids), "face_found": face_found},
        separators=(",", ":"),
    ).encode("utf-8")
    try:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, VERSION, n, dim, normalized, kind, 0))
            fh.write(np.ascontiguousarray(dataset.matrix, dtype="<f4").tobytes())
            fh.write(_META_LEN.pack(len(meta)))
            fh.write(meta)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_embeddings(path: str | Path, expect_kind: int | None = None) -> AnySet:
    """Load an EMB1 file; returns the set type matching its kind byte."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    if len(blob) < _HEADER.size:
        raise FormatError(f"{path}: missing header")
    magic, version, n, dim, normalized, kind, reserved = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if kind not in (KIND_FEATURES, KIND_PROBABILITIES):
        raise FormatError(f"{path}: unknown kind byte {kind}")
    if reserved != 0:
        raise FormatError(f"{path}: reserved field must be 0, got {reserved}")
    if expect_kind is not None and kind != expect_kind:
        want = "features" if expect_kind == KIND_FEATURES else "probabilities"
        raise FormatError(f"{path}: expected a {want} file (kind {expect_kind}), got kind {kind}")

    offset = _HEADER.size
    payload_bytes = n * dim * 4
    if len(blob) < offset + payload_bytes + _META_LEN.size:
        raise FormatError(f"{path}: float payload cut short")
    matrix = (
        np.frombuffer(blob, dtype="<f4", count=n * dim, offset=offset)
        .reshape(n, dim)
        .astype(np.float64)
    )
    offset += payload_bytes
    (meta_len,) = _META_LEN.unpack_from(blob, offset)
    offset += _META_LEN.size
    if len(blob) < offset + meta_len:
        raise FormatError(f"{path}: metadata cut short")
    try:
        meta = json.loads(blob[offset : offset + meta_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: malformed metadata JSON: {exc}") from exc

    if not isinstance(meta, dict) or "ids" not in meta or "face_found" not in meta:
        raise FormatError(f"{path}: metadata must carry 'ids' and 'face_found'")
    ids = meta["ids"]
    face_found = meta["face_found"]
    if len(ids) != n:
        raise FormatError(f"{path}: header says N={n} but metadata has {len(ids)} ids")
    if len(face_found) != n:
        raise FormatError(
            f"{path}: header says N={n} but metadata has {len(face_found)} face flags"
        )

    if kind == KIND_PROBABILITIES:
        return ClassProbabilitySet.create(ids, matrix, check=False)
    return EmbeddingSet.create(
        ids,
        matrix,
        normalized=bool(normalized),
        face_found=[bool(x) for x in face_found],
        check=False,
    )
