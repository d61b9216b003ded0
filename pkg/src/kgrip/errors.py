"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class KgripError(Exception):
    exit_code = 1


class GraphFormatError(KgripError, ValueError):
    """Malformed graph6 / edge-list input."""

    exit_code = 2


class InfeasibleError(KgripError, ValueError):
    """Disconnected input, k larger than the placeable set, bad family parameter."""

    exit_code = 3


class NumericalError(KgripError, ArithmeticError):
    exit_code = 4


class BudgetExceededError(KgripError):
    """Enumeration would exceed the configured subset/triple budget."""

    exit_code = 5

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count
