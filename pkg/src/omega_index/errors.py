"""Exception types shared across the package.

Stability-related errors (:class:`InadmissibleCommutator`, :class:`UnstableCount`,
:class:`GapViolation`) map to CLI exit code 2; everything else maps to exit code 1.
"""


class OmegaIndexError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message, **detail):
        super().__init__(message)
        self.message = message
        #: optional machine-readable context, serialized into CLI error objects
        self.detail = detail


class DimensionMismatch(OmegaIndexError):
    """Operands have incompatible shapes, or a matrix is not square."""


class NonHermitianInput(OmegaIndexError):
    """A matrix required to be Hermitian exceeds the Hermiticity tolerance."""


class ConvergenceFailure(OmegaIndexError):
    """An eigensolver or inverse failed to meet its accuracy contract."""


class NotPositiveDefinite(OmegaIndexError):
    """Matrix passed to the HPD inverse is not positive definite."""


class InvalidParameter(OmegaIndexError):
    """A scalar argument is outside its documented domain."""


class CutTooLarge(OmegaIndexError):
    """A requested corner cut reaches into the truncation boundary collar."""


class InadmissibleCommutator(OmegaIndexError):
    """The pair's commutator is too large for eigenvalue counting to be meaningful.

    Raised when the idempotency-defect bound (4e-2e^2)/(1-e)^2 evaluated at the
    measured epsilon is >= 1/4.  Rescale the pair (see ``scale_admissible``).
    """


class UnstableCount(OmegaIndexError):
    """Different cuts disagree on the counted index."""


class GapViolation(OmegaIndexError):
    """Some corner-block eigenvalue sits within ``gap_floor`` of 1/2."""


class ConfigParse(OmegaIndexError):
    """Malformed configuration, file format, or value list."""


class CalibrationMissing(OmegaIndexError):
    """No pinned-orientation record exists; run the calibration first."""


#: errors that signal an admissibility/stability condition rather than misuse
STABILITY_ERRORS = (InadmissibleCommutator, UnstableCount, GapViolation)
