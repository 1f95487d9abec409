"""Dataset preparation: manifests, crop/resize, and the binary containers."""

from .embfile import (
    KIND_FEATURES,
    KIND_PROBABILITIES,
    read_embeddings,
    write_embeddings,
)
from .imaging import (
    IngestSummary,
    crop_and_resize,
    decode_image,
    encode_png,
    process_manifest,
)
from .manifest import CropRect, DatasetManifest, ManifestEntry, load_manifest, save_manifest
from .records import RecordReader, read_records, write_records

__all__ = [
    "KIND_FEATURES",
    "KIND_PROBABILITIES",
    "read_embeddings",
    "write_embeddings",
    "IngestSummary",
    "crop_and_resize",
    "decode_image",
    "encode_png",
    "process_manifest",
    "CropRect",
    "DatasetManifest",
    "ManifestEntry",
    "load_manifest",
    "save_manifest",
    "RecordReader",
    "read_records",
    "write_records",
]
