"""Batch extraction jobs: walk a directory or manifest, run a backend over
every image, and emit the interchange files in input order."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .emb1 import KIND_FEATURES, KIND_PROBABILITIES, write_emb1
from .faces import EMBEDDING_DIM, FaceExtractor, landmark_template
from .features import DEFAULT_MODEL, load_model
from .imageio import ImageReadError, decode_rgb

log = logging.getLogger("faceset_extractors.pipeline")

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".webp"}


class JobError(Exception):
    """Job inputs are unusable (bad directory, manifest, or arguments)."""


@dataclass
class ExtractionJob:
    input_path: str
    out_prefix: str
    batch_size: int = 32
    deterministic: bool = True
    model: str = DEFAULT_MODEL

    def __post_init__(self):
        if self.batch_size < 1:
            raise JobError(f"batch size must be positive, got {self.batch_size}")


def collect_entries(input_path: str | Path) -> list[tuple[str, Path]]:
    """(id, image path) pairs in input order.

    A directory yields its image files sorted by name; a manifest JSON
    yields its entries in file order.
    """
    path = Path(input_path)
    if path.is_dir():
        files = sorted(
            p for p in path.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES
        )
        if not files:
            raise JobError(f"no image files in {path}")
        return [(p.name, p) for p in files]
    if path.is_file():
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
            entries = [
                (str(e["id"]), Path(e["source_path"])) for e in raw["entries"]
            ]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise JobError(f"{path}: not a valid manifest: {exc}") from exc
        if not entries:
            raise JobError(f"{path}: manifest has no entries")
        ids = [i for i, _ in entries]
        if len(set(ids)) != len(ids):
            raise JobError(f"{path}: duplicate ids in manifest")
        return entries
    raise JobError(f"{input_path}: not a directory or manifest file")


@dataclass
class ExtractionSummary:
    rows: int = 0
    skipped: int = 0
    outputs: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "rows": self.rows,
            "skipped": self.skipped,
            "outputs": list(self.outputs),
            "errors": list(self.errors),
        }


def _write_error_sidecar(prefix: Path, summary: ExtractionSummary) -> None:
    if summary.errors:
        sidecar = prefix.with_name(prefix.name + ".errors.json")
        sidecar.write_text(json.dumps(summary.errors, indent=2) + "\n")
        summary.outputs.append(str(sidecar))


def extract_inception(job: ExtractionJob) -> ExtractionSummary:
    """One feature row and one probability row per decodable image.

    Undecodable images are skipped and recorded in the sidecar error list;
    their ids are omitted from both output files identically, so row order
    and id sets always agree.
    """
    model = load_model(job.model)
    entries = collect_entries(job.input_path)
    summary = ExtractionSummary()
    kept_ids: list[str] = []
    vectors: list[np.ndarray] = []
    for entry_id, path in entries:
        try:
            vectors.append(model.preprocess(decode_rgb(path)))
        except ImageReadError as exc:
            log.info("skipping %s: %s", entry_id, exc)
            summary.errors.append({"id": entry_id, "error": str(exc)})
            summary.skipped += 1
            continue
        kept_ids.append(entry_id)

    feature_rows = []
    prob_rows = []
    for start in range(0, len(vectors), job.batch_size):
        batch = np.stack(vectors[start : start + job.batch_size])
        features, probs = model.infer(batch)
        feature_rows.append(features)
        prob_rows.append(probs)
    features = (
        np.vstack(feature_rows) if feature_rows else np.empty((0, model.feature_dim))
    )
    probs = np.vstack(prob_rows) if prob_rows else np.empty((0, model.class_count))

    prefix = Path(job.out_prefix)
    features_path = prefix.with_name(prefix.name + ".features.emb")
    probs_path = prefix.with_name(prefix.name + ".probs.emb")
    write_emb1(features_path, kept_ids, features, kind=KIND_FEATURES)
    write_emb1(probs_path, kept_ids, probs, kind=KIND_PROBABILITIES)
    summary.rows = len(kept_ids)
    summary.outputs += [str(features_path), str(probs_path)]
    _write_error_sidecar(prefix, summary)
    return summary


def extract_faces(job: ExtractionJob) -> ExtractionSummary:
    """One embedding row per decodable image plus a landmark manifest.

    Images where no face is found get an all-zero row flagged
    face_found=false (they still occupy their row, so downstream "not a
    face" accounting stays with the consumer). Undecodable images are
    skipped to the sidecar like extract_inception.
    """
    extractor = FaceExtractor()
    entries = collect_entries(job.input_path)
    summary = ExtractionSummary()
    kept_ids: list[str] = []
    rows: list[np.ndarray] = []
    flags: list[bool] = []
    landmark_entries: list[dict] = []
    for entry_id, path in entries:
        try:
            rgb = decode_rgb(path)
        except ImageReadError as exc:
            log.info("skipping %s: %s", entry_id, exc)
            summary.errors.append({"id": entry_id, "error": str(exc)})
            summary.skipped += 1
            continue
        kept_ids.append(entry_id)
        box = extractor.detect(rgb)
        embedding = extractor.embed(rgb, box) if box is not None else None
        if embedding is None:
            rows.append(np.zeros(EMBEDDING_DIM))
            flags.append(False)
            continue
        rows.append(embedding)
        flags.append(True)
        landmark_entries.append(
            {
                "id": entry_id,
                "source_path": str(path),
                "crop": {
                    "x": box.x, "y": box.y,
                    "width": box.width, "height": box.height,
                },
                "landmarks": [[float(x), float(y)] for x, y in landmark_template(box)],
            }
        )

    matrix = np.vstack(rows) if rows else np.empty((0, EMBEDDING_DIM))
    prefix = Path(job.out_prefix)
    faces_path = prefix.with_name(prefix.name + ".faces.emb")
    write_emb1(
        faces_path, kept_ids, matrix,
        kind=KIND_FEATURES, normalized=True, face_found=flags,
    )
    landmarks_path = prefix.with_name(prefix.name + ".landmarks.json")
    landmarks_path.write_text(
        json.dumps({"entries": landmark_entries}, indent=2) + "\n", encoding="utf-8"
    )
    summary.rows = len(kept_ids)
    summary.outputs += [str(faces_path), str(landmarks_path)]
    _write_error_sidecar(prefix, summary)
    return summary
