"""Exception types shared across the package."""


class WillmoreSymError(Exception):
    """Base class for all package errors."""


class PoleError(WillmoreSymError, ZeroDivisionError):
    """A rational map was evaluated at a zero of its denominator."""


class FieldMixError(WillmoreSymError, ValueError):
    """Two exact scalars with different adjoined square roots were combined."""


class ApproxModeError(WillmoreSymError, TypeError):
    """An exact-only operation was requested on floating-point data."""


class ParseError(WillmoreSymError, ValueError):
    """Malformed text input. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeMismatch(WillmoreSymError, ValueError):
    pass


class ConvergenceError(WillmoreSymError, ArithmeticError):
    pass


class SingularW0(WillmoreSymError, ArithmeticError):
    pass


class DegenerateG3(WillmoreSymError, ValueError):
    """The quadruple has f1*f4 + f2*f3 identically zero."""


class DomainError(WillmoreSymError, ValueError):
    pass


class ZeroLeadError(WillmoreSymError, ZeroDivisionError):
    pass


class BranchPointError(WillmoreSymError, ArithmeticError):
    pass


class NonrationalAntiderivative(WillmoreSymError, ValueError):
    """The integrand has a nonzero residue, so its primitive needs logarithms."""


class NonConvergence(WillmoreSymError, ArithmeticError):
    pass


class MismatchError(WillmoreSymError, AssertionError):
    """A computed product matrix differs from its closed-form template."""


class InconsistentTheorem(WillmoreSymError, AssertionError):
    """Two routes that must agree by theory disagreed (implementation bug)."""


class DegreeCapExceeded(WillmoreSymError, OverflowError):
    pass


class UnknownExample(WillmoreSymError, KeyError):
    pass
