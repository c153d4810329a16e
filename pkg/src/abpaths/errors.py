"""Exception types shared across the package."""


class AbpathsError(Exception):
    """Base class for all package errors."""


class NonPlanarError(AbpathsError):
    """The graph admits no planar embedding."""


class ValidationError(AbpathsError):
    """The instance violates a structural invariant; carries the full report."""

    def __init__(self, report):
        super().__init__("; ".join(report.violations))
        self.report = report


class InfeasibleError(AbpathsError):
    """The instance provably has no disjoint A,B-paths solution."""


class WitnessIndexError(AbpathsError):
    """Witness index outside 1..S."""


class InternalInconsistencyError(AbpathsError):
    """An invariant that must hold by construction was violated; indicates a bug."""


class NotPerfectSquareError(InternalInconsistencyError):
    """An integer square root was requested for a non-square value."""


class NonIntegerCoefficientError(InternalInconsistencyError):
    """Polynomial interpolation produced a non-integer coefficient."""


class InstanceTooLargeError(AbpathsError):
    """Brute-force reference computation refused: instance exceeds its size cap."""


class NonCubicError(AbpathsError):
    """A cubic graph was required."""


class WorkLimitExceededError(AbpathsError):
    """Estimated exact-arithmetic work exceeds the configured budget."""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class ParseError(AbpathsError):
    """Instance file could not be parsed; carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InfeasibleParametersError(AbpathsError):
    """Random generator parameters cannot produce a valid instance."""
