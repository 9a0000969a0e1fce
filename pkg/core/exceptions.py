"""Errors raised by the toolkit"""


class WilberforceError(Exception):
    """Base class for every toolkit error"""


class ConfigError(WilberforceError):
    """Invalid or missing configuration value"""


class DiscriminantNegative(WilberforceError):
    """No real momentum closes the energy equation on the section"""


class EmptySample(WilberforceError):
    """Every drawn initial condition was rejected"""


class IntegrationDivergence(WilberforceError):
    """A state component became non-finite"""

    def __init__(self, step_index: int, message: str = ""):
        self.step_index = step_index
        super().__init__(message or f"non-finite state at step {step_index}")


class NotInvariant(WilberforceError):
    """Polynomial does not Poisson-commute with H0"""


class NoRepresentation(WilberforceError):
    """Invariant polynomial has no expression in the Hopf generators"""


class NoConvergence(WilberforceError):
    """Newton-type solve stopped before reaching its tolerance"""

    def __init__(self, message: str, residual: float = float("nan"), iterations: int = 0):
        self.residual = residual
        self.iterations = iterations
        super().__init__(message)


class DegenerateJacobian(WilberforceError):
    """Jacobian is singular to working precision"""


class DegenerateChart(WilberforceError):
    """Implicit chart z = psi(x, y) is not available at the point"""


class ZeroEnergy(WilberforceError):
    """Relative energy error is undefined at a zero-energy start"""
