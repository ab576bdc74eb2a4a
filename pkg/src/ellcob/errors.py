"""Shared exception types."""
from __future__ import annotations


class ConsistencyError(RuntimeError):
    """Two independent computation routes disagreed, or an internal
    structural guarantee failed.  This always means a bug, never bad
    user input; the command line maps it to exit code 3."""


class FunctionalParseError(ValueError):
    """Bad user input to one of the small expression grammars."""

    def __init__(self, message: str, position: int | None = None) -> None:
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
