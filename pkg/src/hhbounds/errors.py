"""Exception hierarchy shared by every module."""


class HHError(Exception):
    """Base class for all errors raised by hhbounds."""


class InputError(HHError, ValueError):
    """An argument violates a documented precondition."""


class RangeError(InputError):
    """A target value lies outside the range of a monotone map."""


class ChebyshevError(HHError):
    """The pair (omega0, omega1) does not behave like a positive Chebyshev system."""


class ContractError(HHError):
    """The hypotheses of a bound are not met (e.g. a singleton-support measure)."""


class DegeneracyError(ContractError):
    """A normalising quantity that must be positive came out nonpositive."""


class EvaluationError(HHError, ArithmeticError):
    """A function produced a non-finite value at a quadrature node."""


class GeneratorError(HHError):
    """A random specimen generator repeatedly failed its own confirmation check."""


class ConfigError(HHError):
    """A configuration text could not be parsed.

    ``line`` and ``column`` are 1-based; either may be ``None`` when the
    problem is not tied to a position.
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
