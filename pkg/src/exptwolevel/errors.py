"""Exception hierarchy shared across the package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole (e.g. Gamma at a non-positive integer)."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class AccuracyError(ArithmeticError):
    """A series or integrator failed to reach the requested accuracy.

    Carries the best residual actually achieved in ``residual``.
    """

    def __init__(self, message, residual=None, partial=None):
        super().__init__(message)
        self.residual = residual
        self.partial = partial


class ExponentOverflowError(OverflowError):
    """An exp() argument exceeded the supported range; names the exponent."""

    def __init__(self, exponent):
        super().__init__(f"exp argument {exponent!r} outside safe range (|arg| > 700)")
        self.exponent = exponent


class DegeneracyError(ArithmeticError):
    """A linear system that fixes integration constants is singular."""


class ConfigError(ValueError):
    """Invalid sweep / CLI configuration."""
