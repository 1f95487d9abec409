"""Image decoding and the deterministic resize used by every extractor."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError


class ImageReadError(Exception):
    """File missing or bytes not decodable as an image."""


def decode_rgb(path: str | Path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"))
    except (FileNotFoundError, UnidentifiedImageError, OSError, ValueError) as exc:
        raise ImageReadError(f"cannot decode {path}: {exc}") from exc


def nearest_resize(arr: np.ndarray, height: int, width: int) -> np.ndarray:
    """Nearest-neighbor resample with the fixed floor((i+0.5)*src/dst) rule,
    so outputs are byte-identical everywhere."""
    src_h, src_w = arr.shape[0], arr.shape[1]
    rows = np.clip(
        np.floor((np.arange(height) + 0.5) * (src_h / height)).astype(np.int64),
        0,
        src_h - 1,
    )
    cols = np.clip(
        np.floor((np.arange(width) + 0.5) * (src_w / width)).astype(np.int64),
        0,
        src_w - 1,
    )
    return np.ascontiguousarray(arr[rows[:, None], cols[None, :]])


def to_grayscale(rgb: np.ndarray) -> np.ndarray:
    """Luma conversion to float64 in [0, 255]."""
    return rgb[..., 0] * 0.299 + rgb[..., 1] * 0.587 + rgb[..., 2] * 0.114
