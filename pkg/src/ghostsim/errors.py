"""Exception hierarchy. The CLI maps each class onto an exit code."""


class GhostsimError(Exception):
    """Base class for all package errors."""


class ParameterError(GhostsimError, ValueError):
    """A physical quantity is missing, non-finite or out of range."""

    def __init__(self, field, value, reason="must be positive and finite"):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r}: {reason}")


class SingularConfigurationError(GhostsimError, ValueError):
    """The source is exactly unentangled (4 Omega^2 sigma^2 = hbar^2)."""


class GridGuardError(GhostsimError, RuntimeError):
    """A numerical guard tripped (window edge, resolution, memory)."""


class QuadratureError(GhostsimError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class FitUnavailableError(GhostsimError, ValueError):
    """A scan does not show enough fringe maxima to fit a width."""


class ConfigError(GhostsimError, ValueError):
    """Malformed scenario file or CSV input."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
