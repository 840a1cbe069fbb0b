"""Exception types shared across the package."""


class SingTraceError(Exception):
    """Base class for all numerical failures raised by this package."""


class PoleError(SingTraceError, ValueError):
    """A function was evaluated at one of its poles."""


class ConvergenceError(SingTraceError, ArithmeticError):
    """A series, iteration or extrapolation failed to converge."""


class DomainError(SingTraceError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class IntegrationError(SingTraceError, RuntimeError):
    """The ODE integrator could not reach the requested end point."""


class SpectrumError(SingTraceError, RuntimeError):
    """Root search for an eigenvalue failed or a root was missed."""
