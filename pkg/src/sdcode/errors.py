"""Exception types shared across the package.

Each CLI failure class maps to one exception type so exit codes stay stable:
parse errors 2, validation errors 3, budget errors 4, incomplete catalogs 5.
"""

from __future__ import annotations


class SdcodeError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ParseError(SdcodeError):
    """Malformed input file or record line."""

    exit_code = 2


class ValidationError(SdcodeError):
    """Input violates a documented precondition."""

    exit_code = 3


class BudgetExceededError(SdcodeError):
    """An enumeration or search exceeded its configured budget.

    ``partial`` may carry whatever was computed before the budget tripped,
    flagged so callers never mistake it for a complete result.
    """

    exit_code = 4

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class IncompleteCatalogError(SdcodeError):
    """A classification finished without meeting its mass certificate.

    Carries the deficit (expected minus achieved, as exact integers) so the
    caller can see how far short the run fell.
    """

    exit_code = 5

    def __init__(self, message: str, expected: int, achieved: int, records=None):
        super().__init__(message)
        self.expected = expected
        self.achieved = achieved
        self.deficit = expected - achieved
        self.records = records
