"""Exception hierarchy shared by every module."""


class HyperBpaError(Exception):
    """Base class for all errors raised by this package."""


class AlphabetMismatch(HyperBpaError, ValueError):
    pass


class ArityMismatch(HyperBpaError, ValueError):
    pass


class BadArity(HyperBpaError, ValueError):
    pass


class TooManyTraces(HyperBpaError, ValueError):
    pass


class RaggedTraces(HyperBpaError, ValueError):
    pass


class ParseError(HyperBpaError, ValueError):
    """Syntax error with a 1-based source position and the tokens that would have been accepted."""

    def __init__(self, message, line=1, column=1, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class UnboundVariable(HyperBpaError, ValueError):
    pass


class NotSafe(HyperBpaError, ValueError):
    pass


class NotUniversallySafe(HyperBpaError, ValueError):
    pass


class IndexOutOfRange(HyperBpaError, IndexError):
    pass


class UnknownWord(HyperBpaError, KeyError):
    pass


class TableNotReady(HyperBpaError, RuntimeError):
    pass


class ArityTooLarge(HyperBpaError, ValueError):
    pass


class BudgetExceeded(HyperBpaError, RuntimeError):
    """Raised by the learner when a configured limit is hit; carries the partial report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
