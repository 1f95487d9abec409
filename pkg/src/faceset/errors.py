"""Exception hierarchy shared by all faceset modules.

Two branches matter to callers: ``InputError`` (bad files, flags, or
data shapes; CLI exit code 2) and ``NumericError`` (the math itself
failed; CLI exit code 3).
"""

from __future__ import annotations


class FacesetError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 2


class InputError(FacesetError):
    """Inputs could not be loaded, parsed, or validated."""

    exit_code = 2


class NumericError(FacesetError):
    """A numeric computation failed on otherwise well-formed inputs."""

    exit_code = 3


class InvalidInput(InputError):
    """Non-finite values or out-of-domain arguments."""


class InsufficientSamples(InputError):
    """Fewer valid rows than the statistic requires."""


class NotSymmetric(NumericError):
    """Matrix is not symmetric within tolerance."""


class NotPSD(NumericError):
    """Matrix has eigenvalues below the negative clamp tolerance."""


class DimensionMismatch(InputError):
    """Operands disagree on feature dimensionality."""


class InvalidSplit(InputError):
    """Split count outside [1, N]."""


class DegenerateEmbedding(InputError):
    """A valid row has zero norm and cannot be L2-normalized."""

    def __init__(self, row_id: str):
        super().__init__(f"embedding row {row_id!r} has zero norm")
        self.row_id = row_id


class InsufficientReference(InputError):
    """Match classification needs at least one valid reference row."""


class InvalidK(InputError):
    """Requested subset size outside [1, valid rows]."""


class PoolTooLarge(InputError):
    """Exhaustive search guard: too many valid rows to enumerate."""


class CropOutOfBounds(InputError):
    """Crop rectangle extends past the source image."""


class DecodeError(InputError):
    """Image bytes could not be decoded."""


class IoError(InputError):
    """Filesystem read or write failed."""


class FormatError(InputError):
    """Container magic, version, kind, or metadata is malformed."""


class CorruptRecord(InputError):
    """A record payload failed its CRC-32 check."""

    def __init__(self, index: int):
        super().__init__(f"record {index} failed CRC-32 validation")
        self.index = index


class TruncatedFile(InputError):
    """File ended in the middle of a record."""
