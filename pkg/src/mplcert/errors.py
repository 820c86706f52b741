"""Exception types shared across the package."""


class MplcertError(Exception):
    """Base class for all errors raised by this package."""


class CapacityError(MplcertError, ValueError):
    """A request exceeds a configured size or precision limit."""


class DivergenceError(MplcertError, ValueError):
    """The requested series or integral diverges."""


class AdmissibilityError(MplcertError, ValueError):
    """Arguments sit on the unit boundary in a non-convergent pattern."""


class DomainError(MplcertError, ValueError):
    """Argument outside the supported real branch."""


class QuadratureError(MplcertError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""
