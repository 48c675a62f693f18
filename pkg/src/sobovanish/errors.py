"""Exception hierarchy shared by all modules."""

__all__ = [
    "SobovanishError",
    "DomainError",
    "PoleError",
    "AccuracyError",
    "SupportOverflowError",
    "ConstructionError",
    "SynthesisError",
    "StiffnessError",
    "DiffeomorphismError",
    "ConfigError",
]


class SobovanishError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SobovanishError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation at (or beyond) a pole, e.g. Gamma(1 - 2s) at s = 1/2."""


class AccuracyError(SobovanishError, ArithmeticError):
    """A quadrature could not reach its tolerance within the budget."""

    def __init__(self, message, achieved=None, value=None):
        super().__init__(message)
        self.achieved = achieved
        self.value = value


class SupportOverflowError(SobovanishError, ValueError):
    """A sampled field carries mass in the grid's guard band."""


class ConstructionError(SobovanishError, ValueError):
    """A schedule or mollifier violates its invariants."""


class SynthesisError(SobovanishError, RuntimeError):
    """Schedule synthesis did not reach the requested endpoint residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class StiffnessError(SobovanishError, RuntimeError):
    """Adaptive step size underflow in the flow integrator."""


class DiffeomorphismError(SobovanishError, RuntimeError):
    """A 1D endpoint map failed the strict monotonicity check."""


class ConfigError(SobovanishError, ValueError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
