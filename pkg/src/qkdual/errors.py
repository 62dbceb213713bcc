"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operand shapes are incompatible or not a power of two."""


class NotUnitaryError(ValueError):
    """A matrix that must be unitary fails the U^dagger U = I check."""


class NotNormalizedError(ValueError):
    """A state vector that must have unit norm does not."""


class ConvergenceError(RuntimeError):
    """The eigensolver could not meet its residual tolerance."""


class ProgramRejected(ValueError):
    """A bit string is not an accepted program of the reference machine."""

    def __init__(self, reason: str, bits: str = ""):
        self.reason = reason
        self.bits = bits
        super().__init__(f"{reason}: {bits!r}" if bits else reason)


class ZeroOverlapError(ValueError):
    """Overlap is zero, so the approximation penalty is infinite."""


class NoCandidateError(RuntimeError):
    """No program within the budget reached the target with finite penalty."""


class ParseError(ValueError):
    """Matrix or state text could not be parsed."""
