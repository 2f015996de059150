"""Exception types shared by all modules, each tied to a CLI exit code."""


class BtStrataError(Exception):
    exit_code = 1


class UsageError(BtStrataError, ValueError):
    exit_code = 2


class BudgetError(BtStrataError):
    """Raised when an enumeration would exceed its configured size limit."""

    exit_code = 3


class PrecisionError(BtStrataError, ArithmeticError):
    """Raised when a result would depend on digits that are not known."""

    exit_code = 4


class InvariantViolation(BtStrataError, AssertionError):
    """A structural identity that must always hold has failed. Always a bug."""

    exit_code = 5
