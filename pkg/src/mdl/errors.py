"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class MdlError(Exception):
    """Base class for all errors raised by :mod:`mdl`."""


class DiagramSyntaxError(MdlError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class FormulaSyntaxError(MdlError):
    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.position = position


class NotRooted(MdlError):
    """Raised when an operation needs every point reachable from x0."""


class EdgeAbsent(MdlError):
    pass


class PreconditionError(MdlError):
    """A named precondition failed (``not-rooted``, ``not-minimal``, ...)."""

    def __init__(self, reason: str, message: str | None = None):
        super().__init__(message or reason)
        self.reason = reason


class BudgetExceeded(MdlError):
    def __init__(self, what: str, required: int, budget: int):
        super().__init__(
            f"{what}: {required} exceeds the configured budget of {budget}"
        )
        self.what = what
        self.required = required
        self.budget = budget


class ExpansionCapExceeded(BudgetExceeded):
    """Raised when a gamma formula would have too many disjuncts.

    Callers should fall back to :func:`mdl.semantics.gamma_semantic`.
    """

    def __init__(self, required: int, budget: int):
        super().__init__("disjunct count", required, budget)


class InternalDisagreement(MdlError):
    """Two independent computations of the same object differ."""


class UnknownCatalogEntry(MdlError):
    pass
