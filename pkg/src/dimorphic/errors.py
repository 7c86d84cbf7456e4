"""Exception hierarchy shared across the package."""


class DimorphicError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DimorphicError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DimorphicError, ArithmeticError):
    """A factor of a product or denominator vanishes."""


class OrderMismatchError(DimorphicError, ValueError):
    """Two truncated series with different truncation orders were combined."""


class AliasingError(DimorphicError, ValueError):
    """Too few quadrature nodes for the rule to be exact."""


class ImpossibleOutcomeError(DimorphicError, RuntimeError):
    """A simulation produced an outcome whose exact probability is zero."""


class GridParseError(DimorphicError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
