"""Dense symmetric linear algebra and Gaussian statistics for distribution
distances.

All computation is float64 even when embeddings arrive narrower: the
trace-of-square-root term cancels heavily and float32 residue shows up
directly in the result.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .data import EmbeddingSet
from .errors import (
    DimensionMismatch,
    InsufficientSamples,
    InvalidInput,
    NotPSD,
    NotSymmetric,
)

log = logging.getLogger("faceset.numerics")

SYMMETRY_RTOL = 1e-9
EIGENVALUE_CLAMP_RTOL = 1e-8
REGULARIZATION_EPS = 1e-6


@dataclass(frozen=True)
class GaussianSummary:
    """Mean, covariance, and sample count of one embedding set."""

    mean: np.ndarray
    covariance: np.ndarray
    sample_count: int

    def __post_init__(self):
        mean = np.array(self.mean, dtype=np.float64, copy=True).reshape(-1)
        cov = np.array(self.covariance, dtype=np.float64, copy=True)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise InvalidInput("covariance must be square")
        if cov.shape[0] != mean.shape[0]:
            raise InvalidInput("mean and covariance dimensions disagree")
        if not (np.isfinite(mean).all() and np.isfinite(cov).all()):
            raise InvalidInput("non-finite value in Gaussian summary")
        if self.sample_count < 2:
            raise InsufficientSamples("unbiased covariance needs sample_count >= 2")
        scale = 1.0 + (float(np.abs(cov).max()) if cov.size else 0.0)
        if cov.size and float(np.abs(cov - cov.T).max()) > 1e-12 * scale:
            raise NotSymmetric("covariance is not symmetric within tolerance")
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "sample_count", int(self.sample_count))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def validate(self) -> None:
        """Full invariant check including the (cubic-cost) PSD test."""
        w = np.linalg.eigvalsh((self.covariance + self.covariance.T) / 2.0)
        lam_max = float(w[-1]) if w.size else 0.0
        if w.size and float(w[0]) < -EIGENVALUE_CLAMP_RTOL * max(1.0, lam_max):
            raise NotPSD(f"covariance eigenvalue {float(w[0]):.6g} is negative")


@dataclass(frozen=True)
class SymmetricEigen:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def gaussian_summary(embeddings: EmbeddingSet) -> GaussianSummary:
    """Arithmetic mean and unbiased (N-1) covariance of the valid rows.

    Rows flagged face_found=False are excluded; the excluded count is
    logged at info level and recoverable as ``embeddings.n - sample_count``.
    """
    x = embeddings.valid_rows()
    excluded = embeddings.n - x.shape[0]
    if excluded:
        log.info("gaussian_summary: excluded %d rows without a detected face", excluded)
    if x.shape[0] < 2:
        raise InsufficientSamples(
            f"need at least 2 valid rows, got {x.shape[0]}"
        )
    if not np.isfinite(x).all():
        raise InvalidInput("non-finite value in a valid embedding row")
    n = x.shape[0]
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (n - 1)
    cov = (cov + cov.T) / 2.0  # kill BLAS asymmetry residue
    return GaussianSummary(mean=mean, covariance=cov, sample_count=n)


def sym_eigen(m: np.ndarray) -> SymmetricEigen:
    """Eigendecomposition of a symmetric matrix via LAPACK.

    Rejects matrices that are asymmetric beyond ``SYMMETRY_RTOL`` relative
    to max(1, max|M|); smaller asymmetry is averaged away before the solve
    so results are deterministic for identical input bits.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInput("expected a square matrix")
    if m.shape[0] < 1:
        raise InvalidInput("matrix must be at least 1x1")
    if not np.isfinite(m).all():
        raise InvalidInput("non-finite value in matrix")
    scale = max(1.0, float(np.abs(m).max()))
    asym = float(np.abs(m - m.T).max())
    if asym > SYMMETRY_RTOL * scale:
        raise NotSymmetric(f"asymmetry {asym:.3g} exceeds tolerance")
    w, v = np.linalg.eigh((m + m.T) / 2.0)
    w.flags.writeable = False
    v.flags.writeable = False
    return SymmetricEigen(eigenvalues=w, eigenvectors=v)


def _clamped_sqrt_eigenvalues(m: np.ndarray) -> tuple[SymmetricEigen, np.ndarray, int]:
    """Eigendecompose, clamp tolerably-negative eigenvalues to 0, sqrt.

    Eigenvalues below -EIGENVALUE_CLAMP_RTOL * max(1, lambda_max) are an
    error, not something to paper over.
    """
    eig = sym_eigen(m)
    w = eig.eigenvalues
    lam_max = float(w[-1])
    tol = EIGENVALUE_CLAMP_RTOL * max(1.0, lam_max)
    lam_min = float(w[0])
    if lam_min < -tol:
        raise NotPSD(
            f"eigenvalue {lam_min:.6g} below clamp tolerance {-tol:.6g}"
        )
    clamped = int((w < 0.0).sum())
    return eig, np.sqrt(np.clip(w, 0.0, None)), clamped


def sqrtm_psd(m: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root: returns S with S @ S ~= M."""
    return sqrtm_psd_details(m)[0]


def sqrtm_psd_details(m: np.ndarray) -> tuple[np.ndarray, int]:
    """Like :func:`sqrtm_psd` but also reports how many eigenvalues were
    clamped to zero."""
    eig, sqrt_w, clamped = _clamped_sqrt_eigenvalues(m)
    v = eig.eigenvectors
    s = (v * sqrt_w) @ v.T
    s = (s + s.T) / 2.0
    return s, clamped


@dataclass(frozen=True)
class FrechetDetail:
    """Distance value plus which numeric fallbacks fired while computing it."""

    value: float
    regularized: bool
    clamped_eigenvalues: int


def _frechet_once(
    mean_term: float, c1: np.ndarray, c2: np.ndarray
) -> tuple[float, int]:
    sqrt_c2, clamped_outer = sqrtm_psd_details(c2)
    inner = sqrt_c2 @ c1 @ sqrt_c2
    inner = (inner + inner.T) / 2.0
    _, sqrt_w, clamped_inner = _clamped_sqrt_eigenvalues(inner)
    trace_sqrt = float(sqrt_w.sum())
    value = mean_term + float(np.trace(c1)) + float(np.trace(c2)) - 2.0 * trace_sqrt
    return value, clamped_outer + clamped_inner


def frechet_distance_details(a: GaussianSummary, b: GaussianSummary) -> FrechetDetail:
    """Squared Wasserstein-2 distance between two Gaussians.

    Computed through the symmetric form Tr((C2^1/2 C1 C2^1/2)^1/2). When
    roundoff drives the inner matrix indefinite beyond tolerance, eps*I
    (eps=1e-6) is added to both covariances once and the whole distance is
    recomputed; that event is reported in the detail.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension {a.dim} vs {b.dim}")
    dmean = a.mean - b.mean
    mean_term = float(dmean @ dmean)
    try:
        value, clamped = _frechet_once(mean_term, a.covariance, b.covariance)
        regularized = False
    except NotPSD:
        log.info(
            "frechet_distance: near-singular covariances, retrying with +%.0e*I",
            REGULARIZATION_EPS,
        )
        eye = np.eye(a.dim)
        value, clamped = _frechet_once(
            mean_term,
            a.covariance + REGULARIZATION_EPS * eye,
            b.covariance + REGULARIZATION_EPS * eye,
        )
        regularized = True
    return FrechetDetail(
        value=max(value, 0.0), regularized=regularized, clamped_eigenvalues=clamped
    )


def frechet_distance(a: GaussianSummary, b: GaussianSummary) -> float:
    """Non-negative squared Wasserstein-2 distance between two summaries."""
    return frechet_distance_details(a, b).value
