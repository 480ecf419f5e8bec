class ShiftLabError(Exception):
    """Base class for every error raised by the package."""


class PreconditionError(ShiftLabError, ValueError):
    pass


class DegenerateMeasureError(ShiftLabError, ValueError):
    pass


class InvalidMeasureError(ShiftLabError, ValueError):
    pass


class NotExtendableError(ShiftLabError):
    """Raised when ``1/t`` is not integrable against the measure."""


class ThresholdError(ShiftLabError):
    """Raised when a prepended weight exceeds the largest admissible value."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class BackwardExtensionError(ShiftLabError):
    """A two-variable backward extension failed; ``failed`` lists the conditions."""

    def __init__(self, message, failed=(), undecided=False):
        super().__init__(message)
        self.failed = tuple(failed)
        self.undecided = undecided


class NotCommutingError(ShiftLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedError(ShiftLabError):
    pass


class SpecError(ShiftLabError, ValueError):
    """Malformed user input (JSON specs, CLI arguments)."""
