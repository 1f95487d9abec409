"""Select k images whose embeddings are maximally spread out.

The objective is max-min dispersion over squared L2 distances: greedy
farthest-point selection gives the classical 1/2-approximation, and an
exhaustive enumerator doubles as the test oracle for small pools.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .data import EmbeddingSet, unit_valid_rows
from .errors import InvalidK, PoolTooLarge

EXHAUSTIVE_MAX_ROWS = 20


@dataclass(frozen=True)
class CurationResult:
    """Chosen subset plus the dispersion it achieves."""

    selected_ids: tuple[str, ...]
    min_pairwise_distance: float
    mean_pairwise_distance: float

    def as_dict(self) -> dict:
        return {
            "selected_ids": list(self.selected_ids),
            "min_pairwise_distance": self.min_pairwise_distance,
            "mean_pairwise_distance": self.mean_pairwise_distance,
        }


def _sq_distances_to(rows: np.ndarray, i: int) -> np.ndarray:
    diffs = rows - rows[i]
    return (diffs * diffs).sum(axis=1)


def _subset_objective(rows: np.ndarray, chosen: tuple[int, ...]) -> tuple[float, float]:
    """(min, mean) pairwise squared distance inside the chosen subset."""
    if len(chosen) < 2:
        return 0.0, 0.0
    dists = []
    for a, b in itertools.combinations(chosen, 2):
        diff = rows[a] - rows[b]
        dists.append(float((diff * diff).sum()))
    return min(dists), math.fsum(dists) / len(dists)


def _result(ids: tuple[str, ...], rows: np.ndarray, chosen: list[int]) -> CurationResult:
    lo, mean = _subset_objective(rows, tuple(chosen))
    return CurationResult(
        selected_ids=tuple(ids[i] for i in chosen),
        min_pairwise_distance=lo,
        mean_pairwise_distance=mean,
    )


def curate_subset(pool: EmbeddingSet, k: int) -> CurationResult:
    """Greedy max-min dispersion selection of k valid rows.

    Seeds with the farthest pair, then repeatedly adds the candidate whose
    minimum squared distance to the selection is largest. All ties break
    toward the lexicographically smallest id, so identical inputs always
    produce identical output. k=1 picks the row farthest from the pool mean.
    """
    ids, rows = unit_valid_rows(pool)
    v = rows.shape[0]
    if not isinstance(k, (int, np.integer)) or k < 1 or k > v:
        raise InvalidK(f"k must be in [1, {v}], got {k!r}")
    k = int(k)

    if k == 1:
        center = rows.mean(axis=0)
        diffs = rows - center
        dist = (diffs * diffs).sum(axis=1)
        best = 0
        for i in range(1, v):
            if dist[i] > dist[best] or (dist[i] == dist[best] and ids[i] < ids[best]):
                best = i
        return _result(ids, rows, [best])

    # Seed: the farthest pair, recorded in id order.
    best_pair = None
    best_key = None
    best_d = -1.0
    for i in range(v - 1):
        d_row = _sq_distances_to(rows, i)
        for j in range(i + 1, v):
            d = float(d_row[j])
            key = (ids[i], ids[j]) if ids[i] < ids[j] else (ids[j], ids[i])
            if d > best_d or (d == best_d and key < best_key):
                best_d = d
                best_key = key
                best_pair = (i, j) if ids[i] < ids[j] else (j, i)
    chosen = list(best_pair)

    min_dist = np.minimum(
        _sq_distances_to(rows, chosen[0]), _sq_distances_to(rows, chosen[1])
    )
    in_set = np.zeros(v, dtype=bool)
    in_set[chosen] = True
    while len(chosen) < k:
        best = None
        for i in range(v):
            if in_set[i]:
                continue
            if (
                best is None
                or min_dist[i] > min_dist[best]
                or (min_dist[i] == min_dist[best] and ids[i] < ids[best])
            ):
                best = i
        chosen.append(best)
        in_set[best] = True
        min_dist = np.minimum(min_dist, _sq_distances_to(rows, best))
    return _result(ids, rows, chosen)


def exhaustive_best_subset(pool: EmbeddingSet, k: int) -> CurationResult:
    """Exact max-min dispersion optimum by enumerating every k-subset.

    Guarded to small pools; intended as the oracle the greedy selector is
    measured against. Ties break toward the lexicographically smallest
    sorted id list.
    """
    ids, rows = unit_valid_rows(pool)
    v = rows.shape[0]
    if v > EXHAUSTIVE_MAX_ROWS:
        raise PoolTooLarge(f"{v} valid rows exceeds the {EXHAUSTIVE_MAX_ROWS}-row guard")
    if not isinstance(k, (int, np.integer)) or k < 1 or k > v:
        raise InvalidK(f"k must be in [1, {v}], got {k!r}")
    k = int(k)

    best_combo = None
    best_key = None
    best_obj = -1.0
    for combo in itertools.combinations(range(v), k):
        obj, _ = _subset_objective(rows, combo)
        key = tuple(sorted(ids[i] for i in combo))
        if obj > best_obj or (obj == best_obj and key < best_key):
            best_obj = obj
            best_key = key
            best_combo = combo
    ordered = sorted(best_combo, key=lambda i: ids[i])
    return _result(ids, rows, ordered)
