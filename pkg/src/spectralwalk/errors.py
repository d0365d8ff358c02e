"""Exception hierarchy shared across the package."""


class SpectralwalkError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(SpectralwalkError):
    """A graph or domain file could not be parsed or violates its schema."""

    def __init__(self, message, line=None, path=None):
        loc = ""
        if path is not None:
            loc += f"{path}"
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.line = line
        self.path = path


class WeightingError(SpectralwalkError):
    """A graph failed validation; carries the individual violation reports."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"graph validation failed:\n{lines}")


class DomainError(SpectralwalkError):
    """A vertex set does not form a usable domain (disconnected, empty interior, ...)."""


class EmptyBoundaryError(DomainError):
    """Operation requires an invertible interior operator, i.e. a nonempty boundary."""


class SolverError(SpectralwalkError):
    """A dense factorization or solve failed; carries a condition estimate when known."""

    def __init__(self, message, condition=None):
        if condition is not None:
            message = f"{message} (condition estimate {condition:.3e})"
        super().__init__(message)
        self.condition = condition


class RecoveryError(SpectralwalkError):
    """Moment-sequence recovery failed; carries the Hankel diagnostics gathered so far."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics
