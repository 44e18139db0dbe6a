"""Exception hierarchy.

Validation problems derive from :class:`ValueError`; numerical breakdowns
derive from :class:`ArithmeticError`. The CLI maps the first family to exit
code 1 and the second to exit code 3.
"""


class DecohistError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(DecohistError, ValueError):
    """A configuration violates a documented invariant."""


class SingularPropagator(ValidationError):
    """``sin(omega*T)`` vanishes, so the propagator amplitude diverges."""


class NegativeDensity(ValidationError):
    """``sin(omega*T) < 0`` without opting into the caustic branch."""


class AsymmetricFunction(ValidationError):
    """A coupling or driving profile is not symmetric about ``T/2``."""


class NonPositive(ValidationError):
    """A length, mass or duration that must be positive is not."""


class DecoupledApparatus(ValidationError):
    """The coupling constant ``g`` is zero, so the pointer records nothing."""


class ConfigError(ValidationError):
    """Malformed configuration file, flag or grid."""


class NumericError(DecohistError, ArithmeticError):
    """Numerical evaluation failed."""


class QuadratureFailure(NumericError):
    """Adaptive quadrature did not reach the requested tolerance."""


class RegimeWarning(UserWarning):
    """An expansion is evaluated outside the regime where it is accurate."""
