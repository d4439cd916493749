from typing import Optional


class OstrowskiError(Exception):
    """Base class for every error raised by the library."""


class ParseError(OstrowskiError):
    def __init__(self, offset: int, message: str, token: str = ""):
        self.offset = offset
        self.message = message
        self.token = token
        super().__init__(f"{message} at offset {offset}" + (f" near '{token}'" if token else ""))


class ExprEvalError(OstrowskiError):
    """Non-finite value produced while evaluating an expression."""

    def __init__(self, offset: int, message: str, subexpr: str = ""):
        self.offset = offset
        self.message = message
        self.subexpr = subexpr
        super().__init__(f"{message} in '{subexpr}' (offset {offset})")


class DiffError(OstrowskiError):
    def __init__(self, offset: Optional[int], message: str):
        self.offset = offset
        self.message = message
        super().__init__(message if offset is None else f"{message} (offset {offset})")


class PreconditionError(OstrowskiError, ValueError):
    pass


class InvalidWeightError(OstrowskiError, ValueError):
    pass
