"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class EndscopeError(Exception):
    """Base class for every error raised by endscope."""


class ParseError(EndscopeError, ValueError):
    """Malformed `.tree`, `.graph` or UNode text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class IllegalNodeError(EndscopeError, ValueError):
    """A UNode that is not a legal walk in its presentation."""


class PreconditionError(EndscopeError, ValueError):
    """An operation was called on inputs violating its stated preconditions."""
