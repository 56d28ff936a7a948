"""Exception types shared by every cstarkit module."""


class CStarError(Exception):
    """Base class for all cstarkit errors."""


class ShapeError(CStarError, ValueError):
    """Operands live in different algebras, or block shapes do not match."""


class DomainError(CStarError, ValueError):
    """An operation was applied outside its domain (e.g. a root of a non-positive)."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class NumericError(CStarError, ArithmeticError):
    """An iterative numerical routine failed to converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class InputError(CStarError, ValueError):
    """Caller-supplied data violates a documented precondition."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
