"""Exception hierarchy shared by every magsim module."""


class MagsimError(Exception):
    """Base class for all errors raised by magsim."""


class InvalidArgumentError(MagsimError, ValueError):
    """An argument is outside the domain of the operation."""


class InvalidStateError(MagsimError, ValueError):
    """A covariance matrix violates symmetry, positivity or the uncertainty relation."""


class PhysicsError(MagsimError):
    """Base class for failures that come from the dynamics rather than the inputs."""


class InstabilityError(PhysicsError):
    """Parametric gain exceeds the beam-splitter cooling; no steady state exists."""

    def __init__(self, message, max_real_part=None):
        super().__init__(message)
        self.max_real_part = max_real_part


class NoSteadyStateError(InstabilityError):
    """Raised by the steady-state solver for a drift that is not Hurwitz stable."""


class DegenerateSystemError(PhysicsError):
    """The vectorized Lyapunov system is singular."""


class IntegrationDivergedError(PhysicsError):
    """An integrated covariance left the physical set (step too large or unstable)."""


class NotBAERegimeError(PhysicsError):
    """Backaction evasion was requested away from zero detuning and zero phase."""


class ConfigError(MagsimError):
    """A scenario configuration could not be parsed or validated."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
