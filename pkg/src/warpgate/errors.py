"""Exception types shared across the package."""


class WarpgateError(Exception):
    """Base class for all errors raised by this package."""


class NotUnitary(WarpgateError):
    """A matrix failed a unitarity check."""


class NotSpecialUnitary(WarpgateError):
    """A matrix is unitary but its determinant is not 1."""


class NegativeDuration(WarpgateError):
    """A time interval was negative."""


class FactorizationFailure(WarpgateError):
    """An internal matrix factorization did not converge to tolerance."""


class NotLocal(WarpgateError):
    """A 4x4 matrix is not a tensor product of one-qubit gates."""


class NonCanonicalCoordinates(WarpgateError):
    """Interaction coordinates are outside the canonical chamber."""


class OutOfRangeAlpha(WarpgateError):
    """A coupling angle is outside the range a single fragment can realize."""
