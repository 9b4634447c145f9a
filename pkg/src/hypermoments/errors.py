"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems -> 1, input format
problems -> 2, internal invariant violations -> 3.
"""


class HypermomentsError(Exception):
    """Base class for all package-specific errors."""


class ParseError(HypermomentsError):
    """Malformed input text (bad token, repeated vertex, ...)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormatError(HypermomentsError):
    """Structurally inconsistent multi-file input (length mismatches etc.)."""


class UnsupportedInputError(HypermomentsError):
    """Input parsed fine but cannot be processed (e.g. edgeless graph)."""


class InvariantViolation(HypermomentsError):
    """A computed result broke a contract that should hold by construction."""
