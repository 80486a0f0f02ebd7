"""Exception hierarchy; the CLI maps each class to an exit code."""


class NymanLabError(Exception):
    exit_code = 1


class DomainError(NymanLabError, ValueError):
    """Input outside the mathematical domain (poles, divergent integrals...)."""

    exit_code = 2


class UnsupportedRangeError(DomainError):
    """Input inside the domain but outside the certified evaluation window."""


class InconclusiveError(NymanLabError, RuntimeError):
    """A numerical procedure could not reach a trustworthy answer."""

    exit_code = 3


class BoundaryZeroError(InconclusiveError):
    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class IncompleteTableError(InconclusiveError):
    pass


class InconsistencyError(InconclusiveError):
    """Numerical results contradict a structural property (e.g. a Gram matrix is not PSD)."""


class InputFormatError(NymanLabError):
    exit_code = 4

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ReportIOError(NymanLabError):
    """Report destination or input file could not be read or written."""

    exit_code = 4
