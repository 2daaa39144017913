"""Exception types raised across the toolkit."""


class QoscError(Exception):
    """Base class for all toolkit errors."""


class DivisionByZero(QoscError, ZeroDivisionError):
    pass


class EvaluationPole(QoscError, ZeroDivisionError):
    pass


class PresentationMismatch(QoscError, ValueError):
    pass


class ModeOutOfRange(QoscError, ValueError):
    pass


class ExprSyntaxError(QoscError, ValueError):
    """Malformed expression text; ``column`` is 1-based."""

    def __init__(self, message, column):
        super().__init__(f"{message} at column {column}")
        self.column = column


class ParameterOutOfRange(QoscError, ValueError):
    pass


class BasisMismatch(QoscError, ValueError):
    pass


class NotDiagonal(QoscError, ValueError):
    pass


class NonPositiveDiagonal(QoscError, ValueError):
    pass


class MarginTooLarge(QoscError, ValueError):
    pass


class UnknownSuite(QoscError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown suite"


class StepBudgetExceeded(QoscError, RuntimeError):
    pass
