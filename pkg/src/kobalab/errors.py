"""Exception types shared across the package."""


class DomainViolation(ValueError):
    """A point lies outside (or numerically on the boundary of) a domain."""


class ConstructionRefused(ValueError):
    """A construction precondition failed; the message names the inequality."""


class ConfigurationError(ValueError):
    """Inconsistent parameters for a triangle or experiment."""


class ToleranceNotMet(RuntimeError):
    """Adaptive quadrature gave up before reaching its error target.

    The best available estimate is kept on ``estimate``.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
