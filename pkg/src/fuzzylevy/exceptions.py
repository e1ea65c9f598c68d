"""Exception types raised across the package."""


class FuzzyLevyError(Exception):
    """Base class for domain errors."""


class GridMismatch(FuzzyLevyError, ValueError):
    """Operands live on different alpha or direction grids."""


class NestednessViolation(FuzzyLevyError, ValueError):
    """A higher alpha-cut is not contained in the cut below it."""

    def __init__(self, level, message=None):
        self.level = level
        super().__init__(message or f"cut at level index {level} is not nested in level {level - 1}")


class EmptyCut(FuzzyLevyError, ValueError):
    """An alpha-cut is empty."""

    def __init__(self, level, message=None):
        self.level = level
        super().__init__(message or f"cut at level index {level} is empty")


class InversionFailed(FuzzyLevyError):
    """A sampled support function could not be turned back into a polygon."""

    def __init__(self, level, reason):
        self.level = level
        self.reason = reason
        super().__init__(f"inversion failed at level index {level}: {reason}")


class TripletInvalid(FuzzyLevyError):
    """A generating triplet does not satisfy the subordinator conditions."""

    def __init__(self, report):
        self.report = report
        super().__init__(report.summary())


class BelowTruncation(FuzzyLevyError, ValueError):
    """Requested jump threshold is finer than the simulation truncation."""


class QuadratureNonConvergence(FuzzyLevyError, ArithmeticError):
    """Numerical integration did not reach the requested accuracy."""

    def __init__(self, error_estimate, target):
        self.error_estimate = error_estimate
        self.target = target
        super().__init__(f"quadrature error estimate {error_estimate:.3e} exceeds target {target:.1e}")


class ConfigError(FuzzyLevyError, ValueError):
    """A run configuration is malformed or inconsistent."""
