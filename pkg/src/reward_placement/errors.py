"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Array shapes or shared dimensions do not agree."""


class ParameterError(ValueError):
    """An argument lies outside its admissible range."""


class ValidationError(ValueError):
    """A mobility model or instance violates its invariants.

    ``violations`` holds the individual diagnostics.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ConvergenceError(RuntimeError):
    """Power iteration hit its iteration cap."""

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence after {iterations} iterations (last L1 residual {residual:.3e})"
        )


class DegenerateModelError(ValueError):
    """A model has zero optimal collectable reward."""


class ResourceLimitError(RuntimeError):
    """A solver refused an instance that exceeds its configured size cap."""


class InstanceFormatError(ValueError):
    """An instance or collection file could not be parsed."""
