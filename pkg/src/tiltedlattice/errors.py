"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class WindowError(RuntimeError):
    """A lattice window is too small to hold a converged state."""


class BoundaryReachError(WindowError):
    """Amplitude reached the hard wall during numeric propagation."""


class ConsistencyError(ValueError):
    """Mutually inconsistent Lissajous target parameters."""


class ConfigError(ValueError):
    """Invalid scenario configuration; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
