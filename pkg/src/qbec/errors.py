"""Exception and warning types raised across the toolkit."""


class QbecError(ValueError):
    """Base class for every domain error raised by :mod:`qbec`."""


class NotHermitian(QbecError):
    pass


class NoConvergence(QbecError, ArithmeticError):
    pass


class NegativeEigenvalue(QbecError):
    pass


class NotPSD(NegativeEigenvalue):
    pass


class InvalidDimension(QbecError):
    pass


class UnsupportedDimensions(QbecError):
    pass


class DimensionMismatch(QbecError):
    pass


class RankZero(QbecError):
    pass


class OutOfRange(QbecError):
    pass


class StateValidationError(QbecError):
    """Raised when a matrix fails one of the density-matrix invariants.

    ``invariant`` names the violated condition (``"shape"``, ``"hermitian"``,
    ``"trace"`` or ``"psd"``) so callers can report it verbatim.
    """

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class NonMaximallyMixedReduction(UserWarning):
    """The Choi state's input-side reduction is not I/m; the extracted map is CP but not TP."""


class RankDeficientReduction(UserWarning):
    """The filtered reduction has a kernel; the channel acts on its support only."""


class ParseError(QbecError):
    """Malformed state/channel file; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"field {field!r}: {message}")
        self.field = field
