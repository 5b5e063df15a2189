"""
Exception hierarchy shared by every fastcp module.

Each error also subclasses the closest builtin so callers catching
``ValueError`` / ``IndexError`` keep working.
"""

from __future__ import annotations

from typing import Optional


class FastCPError(Exception):
    """Base exception for fastcp errors."""

    pass


class ShapeError(FastCPError, ValueError):
    """Raised when sizes or shapes are not conformable."""

    pass


class TensorIndexError(FastCPError, IndexError):
    """Raised when a multi-index or linear index is out of range."""

    def __init__(self, message: str, mode: Optional[int] = None) -> None:
        super().__init__(message)
        self.mode = mode


class ArgumentError(FastCPError, ValueError):
    """Raised for invalid permutations, variants, step sizes and options."""

    pass


class UnsupportedOrderError(FastCPError):
    """Raised when an operation needs N >= 2 but got a vector."""

    pass


class NumericError(FastCPError, ArithmeticError):
    """Raised when non-finite values reach a least-squares update."""

    pass


class DomainError(FastCPError, ValueError):
    """Raised when a nonnegative algorithm receives negative entries."""

    pass


class TensorFormatError(FastCPError):
    """Raised when a tensor or factor file is malformed or truncated."""

    def __init__(self, message: str, path: Optional[str] = None, offset: int = 0):
        location = f"{path}: " if path else ""
        super().__init__(f"{location}{message} (at byte {offset})")
        self.path = path
        self.offset = offset


class BenchOutputError(FastCPError, OSError):
    """Raised when benchmark results cannot be written."""

    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{message}: {path}")
        self.path = path
