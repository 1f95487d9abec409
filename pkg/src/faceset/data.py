"""Core dataset containers: embedding matrices and class-probability matrices.

Everything downstream (metrics, curation, interchange files) speaks these
two types. Matrices are held as read-only float64 arrays regardless of the
precision they arrived in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateEmbedding, InvalidInput

UNIT_NORM_TOL = 1e-4
PROB_ROW_SUM_TOL = 1e-5


def _as_readonly_f64(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=np.float64, order="C", copy=True)
    if out.ndim != 2:
        raise InvalidInput(f"matrix must be 2-D, got {out.ndim}-D")
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class EmbeddingSet:
    """N x D feature matrix with per-row identity and face-found validity.

    Rows with ``face_found=False`` are all-zero placeholders (the producer
    found no face) and are excluded from every statistic. ``normalized``
    records the producer's claim that valid rows are unit L2 norm.
    """

    ids: tuple[str, ...]
    matrix: np.ndarray
    normalized: bool = False
    face_found: np.ndarray = field(default=None)  # type: ignore[assignment]

    @classmethod
    def create(
        cls,
        ids: Sequence[str],
        matrix: np.ndarray,
        normalized: bool = False,
        face_found: Sequence[bool] | None = None,
        check: bool = True,
    ) -> "EmbeddingSet":
        ids = tuple(str(i) for i in ids)
        mat = _as_readonly_f64(np.asarray(matrix))
        if face_found is None:
            mask = np.ones(len(ids), dtype=bool)
        else:
            mask = np.array(face_found, dtype=bool, copy=True)
        mask.flags.writeable = False
        obj = cls(ids=ids, matrix=mat, normalized=bool(normalized), face_found=mask)
        if check:
            obj.validate()
        return obj

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def valid_count(self) -> int:
        return int(self.face_found.sum())

    def valid_rows(self) -> np.ndarray:
        return self.matrix[self.face_found]

    def valid_ids(self) -> tuple[str, ...]:
        return tuple(i for i, ok in zip(self.ids, self.face_found) if ok)

    def validate(self) -> None:
        if len(self.ids) != self.matrix.shape[0]:
            raise InvalidInput(
                f"{len(self.ids)} ids for {self.matrix.shape[0]} matrix rows"
            )
        if len(set(self.ids)) != len(self.ids):
            raise InvalidInput("duplicate ids in embedding set")
        if self.face_found.shape != (self.matrix.shape[0],):
            raise InvalidInput("face_found length does not match row count")
        invalid = self.matrix[~self.face_found]
        if invalid.size and np.any(invalid != 0.0):
            raise InvalidInput("face_found=False rows must be all-zero placeholders")
        valid = self.valid_rows()
        if valid.size and not np.isfinite(valid).all():
            raise InvalidInput("non-finite value in a valid embedding row")
        if self.normalized and valid.size:
            norms = np.linalg.norm(valid, axis=1)
            worst = float(np.abs(norms - 1.0).max())
            if worst > UNIT_NORM_TOL:
                raise InvalidInput(
                    f"set claims unit-norm rows but worst deviation is {worst:.3g}"
                )


@dataclass(frozen=True)
class ClassProbabilitySet:
    """N x C per-image class probabilities; every row sums to 1."""

    ids: tuple[str, ...]
    matrix: np.ndarray

    @classmethod
    def create(
        cls, ids: Sequence[str], matrix: np.ndarray, check: bool = True
    ) -> "ClassProbabilitySet":
        ids = tuple(str(i) for i in ids)
        mat = _as_readonly_f64(np.asarray(matrix))
        obj = cls(ids=ids, matrix=mat)
        if check:
            obj.validate()
        return obj

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def classes(self) -> int:
        return self.matrix.shape[1]

    def validate(self) -> None:
        if len(self.ids) != self.matrix.shape[0]:
            raise InvalidInput(
                f"{len(self.ids)} ids for {self.matrix.shape[0]} matrix rows"
            )
        if len(set(self.ids)) != len(self.ids):
            raise InvalidInput("duplicate ids in probability set")
        if self.matrix.size == 0:
            return
        if not np.isfinite(self.matrix).all():
            raise InvalidInput("non-finite probability value")
        if self.matrix.min() < 0.0 or self.matrix.max() > 1.0:
            raise InvalidInput("probabilities must lie in [0, 1]")
        sums = self.matrix.sum(axis=1)
        worst = float(np.abs(sums - 1.0).max())
        if worst > PROB_ROW_SUM_TOL:
            raise InvalidInput(f"row sums deviate from 1 by up to {worst:.3g}")


def unit_valid_rows(embeddings: EmbeddingSet) -> tuple[tuple[str, ...], np.ndarray]:
    """Valid rows under the set's normalization policy.

    Rows are used as-is when the set claims ``normalized=True`` and are
    L2-normalized here otherwise. A zero-norm valid row cannot be
    normalized and is rejected either way.
    """
    ids = embeddings.valid_ids()
    rows = embeddings.valid_rows()
    if rows.size and not np.isfinite(rows).all():
        raise InvalidInput("non-finite value in a valid embedding row")
    norms = np.linalg.norm(rows, axis=1)
    for row_id, norm in zip(ids, norms):
        if norm == 0.0:
            raise DegenerateEmbedding(row_id)
    if not embeddings.normalized and rows.shape[0]:
        rows = rows / norms[:, None]
    return ids, rows
