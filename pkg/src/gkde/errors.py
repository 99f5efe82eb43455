"""Exception hierarchy shared across the package.

ValidationError maps to CLI exit code 2 (bad inputs, checked before any
computation), NumericalError to exit code 3 (a numerical routine failed to
reach its contract).
"""


class GkdeError(Exception):
    """Base class for all package errors."""


class ValidationError(GkdeError, ValueError):
    """A precondition on user-supplied parameters failed."""


class BandwidthTooLarge(ValidationError):
    """The requested bandwidth is too large for the construction; shrink b."""


class NumericalError(GkdeError, ArithmeticError):
    """A numerical routine could not meet its accuracy contract."""


class QuadratureNonConvergence(NumericalError):
    """Adaptive quadrature hit its refinement limit before the tolerance."""


class EnvelopeViolation(NumericalError):
    """A rejection-sampling envelope was exceeded by a density evaluation."""


class NegativeMass(NumericalError):
    """A computed compensation mass came out negative."""
