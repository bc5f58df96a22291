"""Exception hierarchy shared by the algebra modules."""


class AlgebraError(Exception):
    """Base class for every error raised by relcomp.algebra."""


class DivisionByZero(AlgebraError, ZeroDivisionError):
    pass


class UnsupportedTransformSize(AlgebraError):
    pass


class FieldMismatch(AlgebraError):
    pass


class NotAUnit(AlgebraError):
    pass


class DegreeOverflow(AlgebraError):
    pass


class NotInvertibleModF(AlgebraError):
    """Raised by modular inversion; ``gcd`` holds the monic common factor."""

    def __init__(self, gcd, message=None):
        self.gcd = gcd
        super().__init__(message or f"not invertible modulo f, gcd has degree {gcd.degree}")


class DuplicateAbscissa(AlgebraError):
    pass


class BlockTooSmall(AlgebraError):
    pass


class DimMismatch(AlgebraError):
    pass


class ZeroColumn(AlgebraError):
    pass


class SingularBasis(AlgebraError):
    pass


class SmallFieldError(AlgebraError):
    pass


class BadParameters(AlgebraError, ValueError):
    pass


class StaleTables(AlgebraError):
    pass


class NeedsUnitConstantTerm(AlgebraError):
    pass


class NotCoprime(AlgebraError):
    pass


class BoundTooSmall(AlgebraError):
    pass


class MinimalPolynomialDefect(AlgebraError):
    pass


class NonGeneric(AlgebraError):
    """Typed refusal: the input is outside the generic set the fast algorithms need."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)
