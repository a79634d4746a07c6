"""Exception hierarchy.

Errors split into two families that the CLI maps to distinct exit codes:
``PreconditionError`` (the input is outside the domain of an operation) and
``VerificationError`` (a check that is expected to pass did not).
"""


class FiliformError(Exception):
    pass


class PreconditionError(FiliformError):
    pass


class VerificationError(FiliformError):
    pass


class NegativeUpperIndex(PreconditionError, ValueError):
    pass


class UnboundParameter(PreconditionError, KeyError):
    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__(", ".join(self.missing))

    def __str__(self):
        return "unbound parameters: " + ", ".join(self.missing)


class PolynomialParseError(PreconditionError, ValueError):
    pass


class DimensionMismatch(PreconditionError, ValueError):
    pass


class IndexOutOfRange(PreconditionError, IndexError):
    pass


class SingularMatrix(PreconditionError, ValueError):
    pass


class ParametricInput(PreconditionError, TypeError):
    pass


class NotFiliform(PreconditionError):
    pass


class NotAdapted(PreconditionError):
    pass


class SearchFailed(PreconditionError):
    pass


class InvalidTriple(PreconditionError, ValueError):
    pass


class InvalidDimension(PreconditionError, ValueError):
    pass


class IndexGuard(PreconditionError):
    pass


class DegenerateDenominator(PreconditionError, ZeroDivisionError):
    pass


class NotInRegion(PreconditionError):
    pass


class FormatError(PreconditionError, ValueError):
    pass


class SignPatternFailure(VerificationError):
    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = dict(values or {})


class PreconditionFailure(PreconditionError):
    pass
