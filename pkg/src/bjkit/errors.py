"""Exception types shared across the package.

Kept separate from the numerical modules so callers can catch
``BjkitError`` for any library-raised condition without importing
heavy modules.
"""


class BjkitError(Exception):
    """Base class for all bjkit errors."""


class NonSquareError(BjkitError, ValueError):
    """A square matrix was required."""


class NotHermitianError(BjkitError, ValueError):
    """Hermitian deviation above the allowed tolerance."""


class DimensionMismatchError(BjkitError, ValueError):
    """Operands do not live in compatible spaces / shapes."""


class FieldMismatchError(BjkitError, ValueError):
    """Real-field data carried nonzero imaginary parts, or operand
    fields disagree."""


class ZeroVectorError(BjkitError, ValueError):
    """An operation hypothesis requires a nonzero vector."""


class RankCapError(BjkitError, ValueError):
    """Requested decomposition length is below the matrix rank."""


class InconclusiveError(BjkitError, RuntimeError):
    """An iterative routine hit its cap without certifying a result.

    Raised instead of looping forever; carries whatever diagnostics the
    routine accumulated in ``self.diagnostics``.
    """

    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class DisagreementError(BjkitError, RuntimeError):
    """Two routes that must agree by theorem disagreed outside the
    borderline band.  This indicates a numerical bug, not a result;
    both artifacts are attached for inspection."""

    def __init__(self, msg, *, witness=None, verdict=None):
        super().__init__(msg)
        self.witness = witness
        self.verdict = verdict
