"""faceset: quality and facial-variability evaluation, curation, and
packaging for face-image datasets."""

__version__ = "0.1.0"

from .curator import CurationResult, curate_subset, exhaustive_best_subset
from .data import ClassProbabilitySet, EmbeddingSet, unit_valid_rows
from .metrics import (
    MatchReport,
    VariabilityReport,
    fid,
    fid_details,
    inception_score,
    match_classify,
    pairwise_variability,
)
from .numerics import (
    FrechetDetail,
    GaussianSummary,
    SymmetricEigen,
    frechet_distance,
    frechet_distance_details,
    gaussian_summary,
    sqrtm_psd,
    sqrtm_psd_details,
    sym_eigen,
)
from .report import training_passes

__all__ = [
    "__version__",
    "ClassProbabilitySet",
    "EmbeddingSet",
    "unit_valid_rows",
    "GaussianSummary",
    "SymmetricEigen",
    "FrechetDetail",
    "gaussian_summary",
    "sym_eigen",
    "sqrtm_psd",
    "sqrtm_psd_details",
    "frechet_distance",
    "frechet_distance_details",
    "MatchReport",
    "VariabilityReport",
    "inception_score",
    "fid",
    "fid_details",
    "pairwise_variability",
    "match_classify",
    "CurationResult",
    "curate_subset",
    "exhaustive_best_subset",
    "training_passes",
]
