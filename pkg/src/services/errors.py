from typing import Optional


class DyerError(Exception):
    """Base class for every failure raised by the services."""


class GraphSyntaxError(DyerError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class GraphValidationError(DyerError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class UnknownVertexError(GraphValidationError):
    def __init__(self, name: str):
        super().__init__(f"unknown vertex '{name}'")
        self.name = name


class NotCoxeterError(DyerError):
    """A Coxeter-only operation got a vertex of order other than 2."""


class NotIrreducibleError(DyerError):
    pass


class NotFiniteTypeError(DyerError):
    pass


class CapExceededError(DyerError):
    def __init__(self, message: str, limit: int):
        super().__init__(message)
        self.limit = limit


class InvariantViolation(DyerError):
    """An identity the classification guarantees did not hold."""
