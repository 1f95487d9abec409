"""faceset-extractors: produce the interchange files the faceset toolkit
consumes (classifier features/probabilities and face embeddings/landmarks)."""

__version__ = "0.1.0"

from .emb1 import KIND_FEATURES, KIND_PROBABILITIES, read_emb1, write_emb1
from .faces import FaceBox, FaceExtractor, landmark_template
from .features import PatchProjectionModel, load_model
from .pipeline import (
    ExtractionJob,
    ExtractionSummary,
    collect_entries,
    extract_faces,
    extract_inception,
)

__all__ = [
    "__version__",
    "KIND_FEATURES",
    "KIND_PROBABILITIES",
    "read_emb1",
    "write_emb1",
    "FaceBox",
    "FaceExtractor",
    "landmark_template",
    "PatchProjectionModel",
    "load_model",
    "ExtractionJob",
    "ExtractionSummary",
    "collect_entries",
    "extract_faces",
    "extract_inception",
]
