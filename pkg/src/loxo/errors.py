"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a map or chart.

    ``field`` names the offending argument or coordinate so callers (the
    CLI in particular) can report it in a machine-readable way.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class PreconditionError(ValueError):
    """Input is well formed but violates a stated precondition."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved abs. error {achieved:.3g})")
        self.achieved = achieved


class NumericError(ArithmeticError):
    """A numerical step failed, e.g. a singular metric had to be inverted."""


class UnsupportedProjectionError(ValueError):
    """No chart map is implemented between the requested pair of charts."""
