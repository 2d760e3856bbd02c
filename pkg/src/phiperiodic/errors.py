"""Exception hierarchy shared by every module of the package."""


class PhiPeriodicError(Exception):
    """Base class for all package errors."""


class DomainError(PhiPeriodicError, ValueError):
    """A slope or velocity left the admissible ball."""


class ConvergenceError(PhiPeriodicError):
    """An internal root solve or iteration failed to converge."""


class PreconditionError(PhiPeriodicError, ValueError):
    """An operation was called outside its stated precondition."""


class GridMismatch(PhiPeriodicError, ValueError):
    """Trajectory nodes and perturbation cells are not nested."""


class ConstantsError(PhiPeriodicError):
    """Growth constants violate nu > k * ||psi||_inf."""


class GrowthNotObserved(PhiPeriodicError):
    """Sampled data does not exhibit the requested polynomial growth."""


class LevelSetEmpty(PhiPeriodicError):
    """No point of the level set G = r was found."""


class PenaltyNotConverged(PhiPeriodicError):
    """Quadratic-penalty iterations ended with a large constraint violation."""


class CheckFailed(PhiPeriodicError):
    """A preset hypothesis check failed; ``hypothesis`` names it."""

    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        self.detail = detail
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)


class ConfigError(PhiPeriodicError, ValueError):
    """Scenario configuration is invalid; ``path`` locates the bad field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class ExprSyntaxError(PhiPeriodicError, ValueError):
    """Expression text could not be parsed."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class UnknownIdentifier(PhiPeriodicError, ValueError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown identifier {name!r}")


class EvalError(PhiPeriodicError, ArithmeticError):
    """Expression evaluation produced NaN or infinity."""
