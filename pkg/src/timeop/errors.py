"""Exception types raised by :mod:`timeop`."""

from __future__ import annotations


class TimeOpError(Exception):
    """Base class for every error raised by this package."""


class TruncationError(TimeOpError, ValueError):
    """A requested power or window does not fit inside the truncation."""


class WindowError(TimeOpError, ValueError):
    """Two basis windows are incompatible or their overlap is empty."""


class GammaDomainError(TimeOpError, ValueError):
    """A Gamma function argument is not strictly positive."""


class UnsupportedShiftError(TimeOpError, ValueError):
    """An energy shift is not on the lattice that can be realised."""


class OracleError(TimeOpError, RuntimeError):
    """The quadrature oracle failed to converge."""


class ConfigError(TimeOpError, ValueError):
    """Malformed or invalid suite configuration."""

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"{field}: "
        super().__init__(prefix + message)
