"""Writer/reader for the EMB1 interchange format consumed by the faceset
toolkit.

This speaks the wire format only; it shares no code with the consumer.
Layout (little-endian): magic "EMB1", u32 version=1, u32 N, u32 D, u8
normalized, u8 kind (0=features, 1=probabilities), u16 reserved=0, N*D
float32 row-major, u32 metadata length, UTF-8 JSON {"ids", "face_found"}.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

MAGIC = b"EMB1"
VERSION = 1
KIND_FEATURES = 0
KIND_PROBABILITIES = 1
_HEADER = struct.Struct("<4sIIIBBH")
_META_LEN = struct.Struct("<I")


class Emb1Error(Exception):
    """Malformed EMB1 payload."""


def write_emb1(
    path: str | Path,
    ids: Sequence[str],
    matrix: np.ndarray,
    kind: int,
    normalized: bool = False,
    face_found: Sequence[bool] | None = None,
) -> None:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise Emb1Error("matrix must be 2-D")
    n, dim = matrix.shape
    if len(ids) != n:
        raise Emb1Error(f"{len(ids)} ids for {n} rows")
    if kind not in (KIND_FEATURES, KIND_PROBABILITIES):
        raise Emb1Error(f"bad kind {kind}")
    if face_found is None:
        face_found = [True] * n
    if len(face_found) != n:
        raise Emb1Error(f"{len(face_found)} face flags for {n} rows")
    meta = json.dumps(
        {"ids": list(ids), "face_found": [bool(x) for x in face_found]},
        separators=(",", ":"),
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, n, dim, 1 if normalized else 0, kind, 0))
        fh.write(np.ascontiguousarray(matrix, dtype="<f4").tobytes())
        fh.write(_META_LEN.pack(len(meta)))
        fh.write(meta)


@dataclass
class Emb1File:
    ids: list[str]
    matrix: np.ndarray
    kind: int
    normalized: bool
    face_found: list[bool]


def read_emb1(path: str | Path) -> Emb1File:
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise Emb1Error(f"{path}: missing header")
    magic, version, n, dim, normalized, kind, reserved = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC or version != VERSION or reserved != 0:
        raise Emb1Error(f"{path}: bad header")
    offset = _HEADER.size
    matrix = (
        np.frombuffer(blob, dtype="<f4", count=n * dim, offset=offset)
        .reshape(n, dim)
        .astype(np.float64)
    )
    offset += n * dim * 4
    (meta_len,) = _META_LEN.unpack_from(blob, offset)
    meta = json.loads(blob[offset + 4 : offset + 4 + meta_len].decode("utf-8"))
    return Emb1File(
        ids=list(meta["ids"]),
        matrix=matrix,
        kind=kind,
        normalized=bool(normalized),
        face_found=[bool(x) for x in meta["face_found"]],
    )
