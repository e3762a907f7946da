"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NumericError(ArithmeticError):
    """A numerical procedure failed to converge."""


class MetricError(ValueError):
    """A space description is structurally malformed (parse errors, ragged matrices, bad labels)."""


class MetricInvalidError(MetricError):
    """A well-formed distance matrix violates a metric axiom."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
