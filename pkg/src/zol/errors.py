"""Exception hierarchy shared by all zol modules."""

from __future__ import annotations


class ZolError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ZolError, ValueError):
    """An argument violates a documented precondition."""


class ResourceLimitError(ZolError, RuntimeError):
    """An exact computation would exceed its configured size cap or budget."""


class GraphParseError(ZolError, ValueError):
    """Malformed edge-list input; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class FormulaParseError(ZolError, ValueError):
    """Malformed formula text; carries the 0-based character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.position = position


class UnboundVariableError(ZolError, ValueError):
    """A formula was used where a sentence (or a full assignment) is required."""


class ValidationError(ZolError, ValueError):
    """A structured document (tower, manifest, transcript) failed validation."""


class IllegalMoveError(ZolError, ValueError):
    """A game move violates the play rules; names the rule violated."""
