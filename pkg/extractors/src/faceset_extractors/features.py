"""Classifier-style feature and probability extraction.

The default backend is a fixed random-projection network: pixels are
projected through a frozen, seed-derived weight matrix and a tanh
nonlinearity, with a softmax head on top. It is not a trained model; it is
a deterministic, dependency-free stand-in that honors the interchange
contract (the file format is the contract — heavier backends drop in
behind the same interface when their weights are available).
"""

from __future__ import annotations

import numpy as np

from .imageio import nearest_resize

DEFAULT_MODEL = "tiny-rp"
FEATURE_DIM = 64
CLASS_COUNT = 16
INPUT_SIZE = 64
WEIGHT_SEED = 0x0FACE5E7


class PatchProjectionModel:
    """Frozen random-feature classifier: deterministic by construction."""

    name = DEFAULT_MODEL

    def __init__(
        self,
        feature_dim: int = FEATURE_DIM,
        class_count: int = CLASS_COUNT,
        input_size: int = INPUT_SIZE,
        seed: int = WEIGHT_SEED,
    ):
        self.feature_dim = feature_dim
        self.class_count = class_count
        self.input_size = input_size
        rng = np.random.Generator(np.random.PCG64(seed))
        flat = input_size * input_size * 3
        self._w1 = rng.normal(scale=1.0 / np.sqrt(flat), size=(feature_dim, flat))
        self._b1 = rng.normal(scale=0.1, size=feature_dim)
        self._w2 = rng.normal(scale=1.0 / np.sqrt(feature_dim), size=(class_count, feature_dim))

    def preprocess(self, rgb: np.ndarray) -> np.ndarray:
        small = nearest_resize(rgb, self.input_size, self.input_size)
        return small.astype(np.float64).reshape(-1) / 255.0

    def infer(self, batch: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(features, probabilities) for a batch of preprocessed vectors."""
        if batch.ndim != 2:
            raise ValueError("expected a batch of flattened images")
        features = np.tanh(batch @ self._w1.T + self._b1)
        logits = features @ self._w2.T
        logits -= logits.max(axis=1, keepdims=True)
        exp = np.exp(logits)
        probs = exp / exp.sum(axis=1, keepdims=True)
        return features, probs


def load_model(name: str) -> PatchProjectionModel:
    if name != DEFAULT_MODEL:
        raise ValueError(
            f"unknown model {name!r}; available: {DEFAULT_MODEL}"
        )
    return PatchProjectionModel()
