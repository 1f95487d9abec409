"""Dataset manifests: which source image each id came from and how to crop it."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ..errors import FormatError, InvalidInput, IoError


@dataclass(frozen=True)
class CropRect:
    """Pixel-space crop window; bounds are checked against the image at crop time."""

    x: int
    y: int
    width: int
    height: int

    def __post_init__(self):
        for name in ("x", "y", "width", "height"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidInput(f"crop {name} must be an integer")
        if self.x < 0 or self.y < 0:
            raise InvalidInput("crop offsets must be non-negative")
        if self.width < 1 or self.height < 1:
            raise InvalidInput("crop width and height must be positive")


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    source_path: str
    frame_index: int | None = None
    crop: CropRect | None = None
    landmarks: tuple[tuple[float, float], ...] | None = None


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...]

    def __post_init__(self):
        ids = [e.id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise InvalidInput("duplicate ids in manifest")

    def by_id(self) -> dict[str, ManifestEntry]:
        return {e.id: e for e in self.entries}


def _entry_from_dict(raw: dict, where: str) -> ManifestEntry:
    if not isinstance(raw, dict):
        raise FormatError(f"{where}: entry must be an object")
    try:
        entry_id = raw["id"]
        source_path = raw["source_path"]
    except KeyError as exc:
        raise FormatError(f"{where}: entry missing {exc}") from exc
    if not isinstance(entry_id, str) or not isinstance(source_path, str):
        raise FormatError(f"{where}: id and source_path must be strings")
    frame_index = raw.get("frame_index")
    if frame_index is not None and (not isinstance(frame_index, int) or frame_index < 0):
        raise FormatError(f"{where}: frame_index must be a non-negative integer")
    crop = None
    if raw.get("crop") is not None:
        c = raw["crop"]
        try:
            crop = CropRect(x=c["x"], y=c["y"], width=c["width"], height=c["height"])
        except (TypeError, KeyError, InvalidInput) as exc:
            raise FormatError(f"{where}: bad crop for {entry_id!r}: {exc}") from exc
    landmarks = None
    if raw.get("landmarks") is not None:
        try:
            landmarks = tuple((float(x), float(y)) for x, y in raw["landmarks"])
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{where}: bad landmarks for {entry_id!r}") from exc
    return ManifestEntry(
        id=entry_id,
        source_path=source_path,
        frame_index=frame_index,
        crop=crop,
        landmarks=landmarks,
    )


def load_manifest(path: str | Path) -> DatasetManifest:
    """Parse a UTF-8 JSON manifest: {"entries": [{id, source_path, ...}]}."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("entries"), list):
        raise FormatError(f"{path}: manifest must be an object with an 'entries' list")
    entries = tuple(_entry_from_dict(e, str(path)) for e in raw["entries"])
    try:
        return DatasetManifest(entries=entries)
    except InvalidInput as exc:
        raise FormatError(f"{path}: {exc}") from exc


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    """Write a manifest in the same JSON schema load_manifest reads."""
    entries = []
    for e in manifest.entries:
        raw: dict = {"id": e.id, "source_path": e.source_path}
        if e.frame_index is not None:
            raw["frame_index"] = e.frame_index
        if e.crop is not None:
            raw["crop"] = {
                "x": e.crop.x,
                "y": e.crop.y,
                "width": e.crop.width,
                "height": e.crop.height,
            }
        if e.landmarks is not None:
            raw["landmarks"] = [[x, y] for x, y in e.landmarks]
        entries.append(raw)
    try:
        Path(path).write_text(
            json.dumps({"entries": entries}, indent=2) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
