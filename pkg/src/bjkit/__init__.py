"""bjkit: Birkhoff-James orthogonality at desk scale.

Direct margin verdicts, unit-vector witnesses for operator pairs,
norming semi-inner-product certificates, and projective tensor norm
bounds on finite-dimensional normed spaces.
"""

__version__ = "0.1.0"

from .errors import (
    BjkitError,
    DimensionMismatchError,
    DisagreementError,
    FieldMismatchError,
    InconclusiveError,
    NonSquareError,
    NotHermitianError,
    RankCapError,
    ZeroVectorError,
)
from .linalg import (
    EigResult,
    NumRangeResult,
    SvdResult,
    hermitian_eig,
    numrange_zero,
    spectral_norm,
    svd,
)

__all__ = [
    "BjkitError",
    "DimensionMismatchError",
    "DisagreementError",
    "FieldMismatchError",
    "InconclusiveError",
    "NonSquareError",
    "NotHermitianError",
    "RankCapError",
    "ZeroVectorError",
    "EigResult",
    "SvdResult",
    "NumRangeResult",
    "hermitian_eig",
    "svd",
    "spectral_norm",
    "numrange_zero",
    "__version__",
]
