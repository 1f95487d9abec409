"""Report assembly shared by the CLI: input digests, the training-pass
arithmetic, and finiteness guarantees on everything we emit."""

from __future__ import annotations

import hashlib
import math
from pathlib import Path

import numpy as np

from . import __version__
from .data import ClassProbabilitySet, EmbeddingSet
from .errors import InvalidInput, IoError, NumericError


def training_passes(total_images: int, dataset_size: int) -> float:
    """How many times training sweeps the dataset: total_images / dataset_size."""
    for name, value in (("total_images", total_images), ("dataset_size", dataset_size)):
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
            raise InvalidInput(f"{name} must be an integer, got {value!r}")
        if value < 1:
            raise InvalidInput(f"{name} must be positive, got {value}")
    return total_images / dataset_size


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                digest.update(chunk)
    except OSError as exc:
        raise IoError(f"cannot digest {path}: {exc}") from exc
    return digest.hexdigest()


def describe_input(path: str | Path, dataset) -> dict:
    """Reproducibility trail for one input file."""
    info = {"path": str(path), "sha256": sha256_file(path)}
    if isinstance(dataset, EmbeddingSet):
        info.update(rows=dataset.n, columns=dataset.dim, valid_rows=dataset.valid_count)
    elif isinstance(dataset, ClassProbabilitySet):
        info.update(rows=dataset.n, columns=dataset.classes)
    return info


def assert_finite_numbers(obj, where: str = "report") -> None:
    """Reject any non-finite number anywhere in a report tree."""
    if isinstance(obj, bool):
        return
    if isinstance(obj, (int, float)):
        if not math.isfinite(obj):
            raise NumericError(f"{where} contains a non-finite number: {obj!r}")
    elif isinstance(obj, dict):
        for key, value in obj.items():
            assert_finite_numbers(value, f"{where}.{key}")
    elif isinstance(obj, (list, tuple)):
        for index, value in enumerate(obj):
            assert_finite_numbers(value, f"{where}[{index}]")


def report_header() -> dict:
    return {"tool_version": __version__}
