"""Exception types shared across the library."""


class LatlabError(Exception):
    """Base class for all library-specific errors."""


class SieveCapError(LatlabError, ValueError):
    """Requested sieve limit exceeds the configured memory cap."""


class RangeError(LatlabError, ValueError):
    """Argument outside the documented domain of an operation."""


class PoleError(LatlabError, ValueError):
    """Evaluation requested at a pole of the function."""


class BudgetError(LatlabError, RuntimeError):
    """A configured cost cap (terms, quadrature points, seconds) was exceeded."""


class QuadratureError(LatlabError, RuntimeError):
    """Quadrature refinement failed to converge to the requested tolerance."""


class DivergenceError(LatlabError, ValueError):
    """Integrand fails the decay conditions required for convergence."""


class InvalidFitError(LatlabError, ValueError):
    """A calibration fit violates a structural constraint (e.g. sign)."""
