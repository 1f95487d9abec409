"""FSRC: an append-only container of length-prefixed, CRC-checked payloads.

Layout (all integers little-endian):

    magic  "FSRC" (4 bytes)
    u32    version = 1
    repeated per record:
        u64    payload length
        bytes  payload
        u32    CRC-32 (IEEE) of the payload

The reader streams one record at a time, so memory stays bounded by the
largest single record no matter how large the file is.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path
from typing import Iterable, Iterator

from ..errors import CorruptRecord, FormatError, IoError, TruncatedFile

MAGIC = b"FSRC"
VERSION = 1
_HEADER = struct.Struct("<4sI")
_LENGTH = struct.Struct("<Q")
_CRC = struct.Struct("<I")


def write_records(payloads: Iterable[bytes], path: str | Path) -> int:
    """Write payloads to a new FSRC file; returns the record count."""
    count = 0
    try:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, VERSION))
            for payload in payloads:
                data = bytes(payload)
                fh.write(_LENGTH.pack(len(data)))
                fh.write(data)
                fh.write(_CRC.pack(zlib.crc32(data) & 0xFFFFFFFF))
                count += 1
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return count


class RecordReader:
    """Iterator over FSRC payloads; also a context manager.

    Header problems surface at construction, per-record problems while
    iterating. Holds at most one record in memory at a time.
    """

    def __init__(self, path: str | Path):
        self._path = str(path)
        try:
            self._fh = open(path, "rb")
        except OSError as exc:
            raise IoError(f"cannot open {path}: {exc}") from exc
        header = self._fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            self._fh.close()
            raise TruncatedFile(f"{self._path}: missing container header")
        magic, version = _HEADER.unpack(header)
        if magic != MAGIC:
            self._fh.close()
            raise FormatError(f"{self._path}: bad magic {magic!r}")
        if version != VERSION:
            self._fh.close()
            raise FormatError(f"{self._path}: unsupported version {version}")
        self._index = 0

    def __iter__(self) -> Iterator[bytes]:
        return self

    def __next__(self) -> bytes:
        head = self._read(_LENGTH.size, allow_eof=True)
        if head is None:
            raise StopIteration
        (length,) = _LENGTH.unpack(head)
        payload = self._read(length)
        (stored_crc,) = _CRC.unpack(self._read(_CRC.size))
        if zlib.crc32(payload) & 0xFFFFFFFF != stored_crc:
            index = self._index
            self.close()
            raise CorruptRecord(index)
        self._index += 1
        return payload

    def _read(self, size: int, allow_eof: bool = False) -> bytes | None:
        try:
            data = self._fh.read(size)
        except OSError as exc:
            self.close()
            raise IoError(f"cannot read {self._path}: {exc}") from exc
        if allow_eof and len(data) == 0:
            self.close()
            return None
        if len(data) < size:
            self.close()
            raise TruncatedFile(
                f"{self._path}: record {self._index} cut short "
                f"({len(data)} of {size} bytes)"
            )
        return data

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "RecordReader":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def read_records(path: str | Path) -> RecordReader:
    """Open an FSRC file for streaming iteration over its payloads."""
    return RecordReader(path)
