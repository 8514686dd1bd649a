"""Exceptions raised by gtcs and their command-line exit codes."""

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2


class GTCSError(Exception):
    """Base class for gtcs errors."""
    exit_code = EXIT_INTERNAL


class InvalidParameterError(GTCSError, ValueError):
    """Raised when an operation is called with parameters outside its domain."""
    exit_code = EXIT_USAGE


class DesignFormatError(GTCSError, ValueError):
    """Raised when a design, plate map or results file cannot be parsed."""
    exit_code = EXIT_USAGE


class FormatVersionError(DesignFormatError):
    """Raised when a file was written by an incompatible major version."""


class GridCoverageError(GTCSError):
    """Raised when a results file does not cover the requested alpha x d grid."""
    exit_code = EXIT_USAGE

    def __init__(self, missing):
        self.missing = sorted(missing)
        cells = ", ".join(f"(alpha={a}, d={d})" for a, d in self.missing)
        super().__init__(f"Results are missing {len(self.missing)} grid cell(s): {cells}")


class UsageError(GTCSError):
    """Raised for invalid command-line usage not caught by argparse."""
    exit_code = EXIT_USAGE


class RankDeficientError(GTCSError):
    """Raised when a least-squares subproblem has linearly dependent columns."""

    def __init__(self, message: str, column: int = -1):
        super().__init__(message)
        self.column = column


class CoverageWarning(UserWarning):
    """Warned when m * alpha < n, so some samples cannot all be tested."""
