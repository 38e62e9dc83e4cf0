# Exception hierarchy shared by the library and the CLI
from typing import Optional


class MagnusError(Exception):
    """Base class for every error raised by this package."""


class FieldMismatchError(MagnusError, ValueError):
    """Operands live over different fields or alphabets."""


class ArityMismatchError(MagnusError, ValueError):
    """Number of arguments does not match the number of variables."""


class ZeroPolynomialError(MagnusError, ValueError):
    """An operation undefined for the zero polynomial received it."""


class PresentationError(MagnusError, ValueError):
    """A presentation-engine precondition does not hold."""


class ConfigError(MagnusError, ValueError):
    """An environment setting has an unusable value."""


class ResourceLimitError(MagnusError):
    """A configured term, step or coordinate cap was exceeded."""


class InternalConsistencyError(MagnusError, AssertionError):
    """A proven invariant failed; this always indicates a bug."""


class InputError(MagnusError):
    """Malformed input file or text, with its position."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: int = 1,
        column: int = 1,
    ):
        self.message = message
        self.path = path
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self) -> str:
        where = f"{self.path}:" if self.path else ""
        return f"{where}{self.line}:{self.column}: {self.message}"
