"""Exception hierarchy shared by every fpk module."""


class FpkError(Exception):
    """Base class for all errors raised by fpk."""


# numerics
class NotSquare(FpkError, ValueError):
    pass


class NotHermitian(FpkError, ValueError):
    pass


class ConvergenceFailure(FpkError, ArithmeticError):
    pass


class ZeroPolynomial(FpkError, ValueError):
    pass


class RowsNotOrthonormal(FpkError, ValueError):
    pass


class NonFiniteEntries(FpkError, ValueError):
    pass


# frames
class ZeroVector(FpkError, ValueError):
    pass


class NotTight(FpkError, ValueError):
    pass


class NotSpanning(FpkError, ValueError):
    pass


class NotParseval(FpkError, ValueError):
    pass


class NotNormalized(FpkError, ValueError):
    pass


class DimensionMismatch(FpkError, ValueError):
    pass


# povm
class LabelsNotDistinct(FpkError, ValueError):
    pass


class NotDecomposable(FpkError):
    """The frame has a pair of vectors that are neither collinear nor orthogonal."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotCommutative(FpkError):
    pass


class BadLambdaChoice(FpkError, ValueError):
    pass


class ShapeMismatch(FpkError, ValueError):
    pass


# special frames
class KTooSmall(FpkError, ValueError):
    pass


class UnsupportedOrder(FpkError, ValueError):
    pass


class OddOrder(FpkError, ValueError):
    pass


class WrongLabelCount(FpkError, ValueError):
    pass


# cli / io
class ParseError(FpkError, ValueError):
    pass


class MissingLabels(FpkError, ValueError):
    pass


class MethodInapplicable(FpkError):
    pass


class UnknownTheorem(FpkError, KeyError):
    pass


class InvalidParams(FpkError, ValueError):
    pass
