"""Exception types shared across the package."""


class CominimalError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(CominimalError, ValueError):
    """Operands live in lattices of different dimension."""


class SequenceError(CominimalError, ValueError):
    """A sequence fails to be strictly increasing or positive.

    ``index`` is the first offending position.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class HypothesisError(CominimalError):
    """A growth hypothesis required by a construction does not hold.

    ``report`` carries the :class:`~cominimal.lacunary.GrowthReport` that
    refused the build.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DivergenceError(CominimalError):
    """A set cannot certify that its unexplored layers miss a region."""


class InconclusiveError(CominimalError):
    """A windowed check could not be closed by its certificates."""


class CapExceededError(CominimalError):
    """A finite-group request exceeds the exhaustive-search cap."""
