"""Exception types shared across the library.

Validation errors signal bad inputs (the CLI maps them to exit code 2),
numerical errors signal that a computation could not reach its target
accuracy (exit code 3).
"""


class HolonomyLabError(Exception):
    """Base class for all library errors."""


class ValidationError(HolonomyLabError):
    """Invalid input data or parameters."""


class NumericalError(HolonomyLabError):
    """A numerical routine failed to meet its accuracy contract."""


class ArclengthViolation(ValidationError):
    """The sampled curve is not parametrized by arclength."""


class ZeroM(ValidationError):
    """|m(t)| fell below the minimum allowed modulus on the sample grid."""


class SignChange(ValidationError):
    """Im rho0 or Im rho1 changes sign inside a single segment."""


class ToleranceNotMet(NumericalError):
    """The adaptive integrator exhausted its step budget.

    Carries the best local error estimate achieved so that callers can
    report how far away the target was.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class QuadratureFailure(NumericalError):
    """Adaptive quadrature could not reach the requested accuracy."""


class InsufficientGrid(ValidationError):
    """A residual grid does not cover enough dyadic windows or points."""


class InconclusiveWitness(NumericalError):
    """The vanishing-at-infinity probe could not resolve either way."""


class BasisMismatch(ValidationError):
    """Two length sets refer to incompatible frequency bases."""


class RankMismatch(ValidationError):
    """A glued point or character does not match the ambient rank."""


class TargetNotInNeighborhood(ValidationError):
    """A convergence target lies outside one of the supplied sets."""


class SchemaError(ValidationError):
    """A JSON/CSV payload does not match the expected schema."""
