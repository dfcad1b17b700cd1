"""Exception types shared across the package."""


class PericoneError(Exception):
    """Base class for all package errors."""


class DomainError(PericoneError):
    """A parameter or evaluation point lies outside its admissible domain."""


class ResonanceError(PericoneError):
    """I - Phi(T) is numerically singular; no periodic Green's function exists."""


class SingularityError(PericoneError):
    """State came too close to the singular set (||x(t)||_2 below the guard)."""


class HypothesisError(PericoneError):
    """A standing sign hypothesis on the coefficients is violated."""


class AssumptionAError(PericoneError):
    """A Green's table without verified positivity was used where the cone
    framework requires it."""


class ConfigError(PericoneError):
    """Malformed problem configuration; carries a field path for diagnostics."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class DivergenceError(PericoneError):
    """Fixed-point iteration blew up or collapsed below the singularity guard."""


class SingularJacobianError(PericoneError):
    """Newton's linearized system is numerically singular."""


class NoConvergenceError(PericoneError):
    """Newton did not reach the residual tolerance within the iteration cap."""
