"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class BackendIncomplete(RuntimeError):
    """A one-step backend could not decide a pair (polynomial budget hit)."""

    def __init__(self, sequent, message: str = "one-step backend returned unknown"):
        super().__init__(message)
        self.sequent = sequent


class ResourceLimit(RuntimeError):
    """A configured cap (children, assignments, ...) was exceeded."""

    def __init__(self, message: str, sequent=None):
        super().__init__(message)
        self.sequent = sequent
