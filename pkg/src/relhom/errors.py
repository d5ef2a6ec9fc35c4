"""Exceptions shared across the toolkit."""

from __future__ import annotations


class RelhomError(Exception):
    """Base class for toolkit errors."""


class ValidationError(RelhomError):
    """An object or argument failed structural validation."""


class BudgetError(RelhomError):
    """A computation would exceed the configured resource budget."""

    def __init__(self, what: str, required: int, cap: int):
        super().__init__(f"{what} needs rank {required}, exceeding the budget cap {cap}")
        self.what = what
        self.required = required
        self.cap = cap


class TruncationError(RelhomError):
    """A complex was built too short for the requested degree; increase N."""
