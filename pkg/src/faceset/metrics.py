"""The four dataset evaluation methods: inception score, Frechet distance
between embedding sets, pairwise embedding variability, and per-image match
classification against a reference set.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .data import ClassProbabilitySet, EmbeddingSet, unit_valid_rows
from .errors import (
    DimensionMismatch,
    InsufficientReference,
    InsufficientSamples,
    InvalidInput,
    InvalidSplit,
)
from .numerics import FrechetDetail, frechet_distance_details, gaussian_summary

log = logging.getLogger("faceset.metrics")

PROBABILITY_FLOOR = 1e-12
HISTOGRAM_BINS = 40
HISTOGRAM_RANGE = (0.0, 4.0)
DEFAULT_SPLITS = 10
DEFAULT_MATCH_THRESHOLD = 0.6


@dataclass(frozen=True)
class VariabilityReport:
    """Distribution of squared L2 distances over all unordered row pairs."""

    pair_count: int
    mean: float
    variance: float
    min: float
    max: float
    histogram: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "mean": self.mean,
            "variance": self.variance,
            "min": self.min,
            "max": self.max,
            "histogram_bins": HISTOGRAM_BINS,
            "histogram_range": list(HISTOGRAM_RANGE),
            "histogram": list(self.histogram),
        }


@dataclass(frozen=True)
class MatchReport:
    """How many rows matched a reference identity at a distance threshold."""

    matching: int
    not_matching: int
    not_faces: int
    threshold: float

    def as_dict(self) -> dict:
        return {
            "matching": self.matching,
            "not_matching": self.not_matching,
            "not_faces": self.not_faces,
            "threshold": self.threshold,
        }


def _floored_probabilities(probs: ClassProbabilitySet) -> np.ndarray:
    """Copy of the matrix with entries below the floor raised to it.

    Only rows that actually contained a floored entry are renormalized, so
    clean rows keep their exact bits.
    """
    p = np.array(probs.matrix, copy=True)
    low = p < PROBABILITY_FLOOR
    if low.any():
        p[low] = PROBABILITY_FLOOR
        touched = low.any(axis=1)
        p[touched] /= p[touched].sum(axis=1, keepdims=True)
    return p


def inception_score(
    probs: ClassProbabilitySet, splits: int = DEFAULT_SPLITS
) -> tuple[float, float]:
    """Mean and population variance of per-split inception scores.

    Rows are partitioned into ``splits`` contiguous, equal-as-possible
    groups in id order. Each group scores exp(mean KL(p(y|x) || p(y)))
    with p(y) the group's own column mean; the floor of any group score
    is 1.
    """
    probs.validate()
    n = probs.n
    if not isinstance(splits, (int, np.integer)) or splits < 1:
        raise InvalidSplit(f"splits must be a positive integer, got {splits!r}")
    if splits > n:
        raise InvalidSplit(f"splits={splits} exceeds row count {n}")
    p = _floored_probabilities(probs)
    scores = []
    for i in range(splits):
        part = p[i * n // splits : (i + 1) * n // splits]
        marginal = part.mean(axis=0)
        kl_rows = (part * (np.log(part) - np.log(marginal))).sum(axis=1)
        scores.append(float(np.exp(kl_rows.mean())))
    mean = float(np.mean(scores))
    variance = float(np.var(scores))
    return mean, variance


@dataclass(frozen=True)
class FidDetail:
    """FID value plus the numeric fallbacks that fired along the way."""

    value: float
    regularized: bool
    clamped_eigenvalues: int
    reference_rows: int
    generated_rows: int


def fid_details(reference: EmbeddingSet, generated: EmbeddingSet) -> FidDetail:
    if reference.dim != generated.dim:
        raise DimensionMismatch(
            f"reference dim {reference.dim} vs generated dim {generated.dim}"
        )
    ref = gaussian_summary(reference)
    gen = gaussian_summary(generated)
    detail: FrechetDetail = frechet_distance_details(ref, gen)
    return FidDetail(
        value=detail.value,
        regularized=detail.regularized,
        clamped_eigenvalues=detail.clamped_eigenvalues,
        reference_rows=ref.sample_count,
        generated_rows=gen.sample_count,
    )


def fid(reference: EmbeddingSet, generated: EmbeddingSet) -> float:
    """Frechet distance between Gaussians fitted to the two sets' valid rows.

    Lower is better; 0 means the fitted distributions coincide.
    """
    return fid_details(reference, generated).value


def _pair_distances(rows: np.ndarray) -> np.ndarray:
    """Squared L2 distance for every unordered pair, pairs in row order
    (0,1), (0,2), ..., (1,2), ...
    """
    chunks = []
    for i in range(rows.shape[0] - 1):
        diffs = rows[i + 1 :] - rows[i]
        chunks.append((diffs * diffs).sum(axis=1))
    if not chunks:
        return np.empty(0)
    return np.concatenate(chunks)


def pairwise_variability(embeddings: EmbeddingSet) -> VariabilityReport:
    """Mean/variance/extremes/histogram of all-pairs squared L2 distances.

    Rows are L2-normalized first unless the set claims ``normalized=True``,
    which keeps every distance inside [0, 4]. Mean and variance are exact
    (compensated) sums, so the result does not depend on accumulation order.
    """
    ids, rows = unit_valid_rows(embeddings)
    if rows.shape[0] < 2:
        raise InsufficientSamples(
            f"need at least 2 valid rows to compare, got {rows.shape[0]}"
        )
    d = _pair_distances(rows)
    mean = math.fsum(d) / d.size
    variance = math.fsum((x - mean) ** 2 for x in d) / d.size
    counts, _ = np.histogram(
        np.clip(d, *HISTOGRAM_RANGE), bins=HISTOGRAM_BINS, range=HISTOGRAM_RANGE
    )
    return VariabilityReport(
        pair_count=int(d.size),
        mean=mean,
        variance=variance,
        min=float(d.min()),
        max=float(d.max()),
        histogram=tuple(int(c) for c in counts),
    )


def match_classify(
    generated: EmbeddingSet,
    reference: EmbeddingSet,
    threshold: float = DEFAULT_MATCH_THRESHOLD,
) -> MatchReport:
    """Classify each generated row against the nearest valid reference row.

    A row with no detected face counts as not_faces. Otherwise it matches
    when its minimum (non-squared) Euclidean distance to any valid
    reference row is at most ``threshold``. Rows are compared as stored;
    no normalization is applied.
    """
    if generated.dim != reference.dim:
        raise DimensionMismatch(
            f"generated dim {generated.dim} vs reference dim {reference.dim}"
        )
    if not np.isfinite(threshold):
        raise InvalidInput("threshold must be finite")
    ref = reference.valid_rows()
    if ref.shape[0] == 0:
        raise InsufficientReference("reference set has no valid rows")
    if not np.isfinite(ref).all():
        raise InvalidInput("non-finite value in a valid reference row")
    gen = generated.valid_rows()
    if gen.size and not np.isfinite(gen).all():
        raise InvalidInput("non-finite value in a valid generated row")
    not_faces = generated.n - gen.shape[0]
    matching = 0
    for row in gen:
        diffs = ref - row
        min_sq = float((diffs * diffs).sum(axis=1).min())
        if math.sqrt(min_sq) <= threshold:
            matching += 1
    return MatchReport(
        matching=matching,
        not_matching=gen.shape[0] - matching,
        not_faces=not_faces,
        threshold=float(threshold),
    )
