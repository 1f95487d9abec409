"""Crop/resize kernels and the manifest-driven preparation pipeline."""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import CropOutOfBounds, DecodeError, InvalidInput, IoError
from .manifest import CropRect, DatasetManifest
from .records import write_records

log = logging.getLogger("faceset.ingest")

RESAMPLE_MODES = ("nearest", "bilinear")
DEFAULT_TARGET = 256


def _nearest_indices(src: int, dst: int) -> np.ndarray:
    # Fixed rule: floor((i + 0.5) * src / dst), so output bytes are identical
    # on every platform.
    idx = np.floor((np.arange(dst) + 0.5) * (src / dst)).astype(np.int64)
    return np.clip(idx, 0, src - 1)


def crop_and_resize(
    image: np.ndarray,
    rect: CropRect | None,
    target: int = DEFAULT_TARGET,
    mode: str = "bilinear",
) -> np.ndarray:
    """Crop ``rect`` out of a decoded raster and resample to target x target.

    ``rect=None`` means the full frame. Nearest mode is bit-deterministic;
    bilinear delegates to Pillow and is meant for production output, not
    byte-level reproducibility.
    """
    if mode not in RESAMPLE_MODES:
        raise InvalidInput(f"resample mode must be one of {RESAMPLE_MODES}, got {mode!r}")
    if not isinstance(target, int) or target < 1:
        raise InvalidInput(f"target size must be a positive integer, got {target!r}")
    arr = np.asarray(image)
    if arr.ndim not in (2, 3):
        raise InvalidInput("expected an HxW or HxWxC raster")
    height, width = arr.shape[0], arr.shape[1]
    if rect is None:
        rect = CropRect(x=0, y=0, width=width, height=height)
    if rect.x + rect.width > width or rect.y + rect.height > height:
        raise CropOutOfBounds(
            f"crop {rect} exceeds {width}x{height} source bounds"
        )
    crop = arr[rect.y : rect.y + rect.height, rect.x : rect.x + rect.width]
    if mode == "nearest":
        rows = _nearest_indices(rect.height, target)
        cols = _nearest_indices(rect.width, target)
        return np.ascontiguousarray(crop[rows[:, None], cols[None, :]])
    pil = Image.fromarray(crop)
    return np.asarray(pil.resize((target, target), Image.BILINEAR))


def decode_image(path: str | Path) -> np.ndarray:
    """Decode an image file to an RGB (or grayscale) uint8 array."""
    try:
        with Image.open(path) as img:
            if img.mode not in ("RGB", "L"):
                img = img.convert("RGB")
            return np.asarray(img)
    except FileNotFoundError as exc:
        raise IoError(f"no such image: {path}") from exc
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(f"cannot decode {path}: {exc}") from exc


def encode_png(image: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(image).save(buf, format="PNG")
    return buf.getvalue()


@dataclass
class IngestSummary:
    """Per-entry reconciliation: every manifest entry lands in exactly one bucket."""

    produced: int = 0
    failed: int = 0
    records_written: int = 0
    errors_by_class: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record_failure(self, entry_id: str, exc: Exception) -> None:
        self.failed += 1
        name = type(exc).__name__
        self.errors_by_class[name] = self.errors_by_class.get(name, 0) + 1
        self.failures.append({"id": entry_id, "error": name, "message": str(exc)})

    def as_dict(self) -> dict:
        return {
            "produced": self.produced,
            "failed": self.failed,
            "records_written": self.records_written,
            "errors_by_class": dict(self.errors_by_class),
            "failures": list(self.failures),
        }


def process_manifest(
    manifest: DatasetManifest,
    out_dir: str | Path | None = None,
    records_path: str | Path | None = None,
    target: int = DEFAULT_TARGET,
    mode: str = "bilinear",
) -> IngestSummary:
    """Crop and resize every manifest entry; write images and/or one FSRC file.

    Per-entry failures are recorded and processing continues, so the summary
    always reconciles: produced + failed == len(entries).
    """
    summary = IngestSummary()
    payloads: list[bytes] = []
    if out_dir is not None:
        out_dir = Path(out_dir)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoError(f"cannot create {out_dir}: {exc}") from exc
    for entry in manifest.entries:
        try:
            raster = decode_image(entry.source_path)
            result = crop_and_resize(raster, entry.crop, target=target, mode=mode)
            if out_dir is not None:
                try:
                    Image.fromarray(result).save(out_dir / f"{entry.id}.png")
                except OSError as exc:
                    raise IoError(f"cannot write image for {entry.id!r}: {exc}") from exc
            if records_path is not None:
                payloads.append(encode_png(result))
        except (IoError, DecodeError, CropOutOfBounds, InvalidInput) as exc:
            log.info("ingest: entry %r failed: %s", entry.id, exc)
            summary.record_failure(entry.id, exc)
            continue
        summary.produced += 1
    if records_path is not None:
        summary.records_written = write_records(payloads, records_path)
    return summary
