"""Exception hierarchy.

Everything raised on purpose derives from :class:`QukitError`.  Literal
problems derive from :class:`ParseError` so the CLI can map them to exit
code 2; the rest are domain errors (exit code 3).
"""


class QukitError(ValueError):
    pass


class ParseError(QukitError):
    pass


class LiteralSyntaxError(ParseError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at column {position}: {text!r}"
        super().__init__(message)


class DigitOutOfRange(ParseError):
    pass


class FractionalDigitInInteger(QukitError):
    pass


class NegativeNatural(QukitError):
    pass


class BadInterval(QukitError):
    pass


class BaseMismatch(QukitError):
    pass


class BadBase(QukitError):
    pass


class NotRepresentable(QukitError):
    pass


class ZeroVector(QukitError):
    pass


class MixedNumberType(QukitError):
    pass


class RowCollision(QukitError):
    pass


class ArityMismatch(QukitError):
    pass


class DivisionByZero(QukitError, ZeroDivisionError):
    pass


class IllegalOpForType(QukitError):
    pass


class OutOfDomain(QukitError):
    """A base change was asked of a value with no finite string in the target base."""

    def __init__(self, message, offending=()):
        self.offending = list(offending)
        super().__init__(message)


class PaddingCollision(OutOfDomain):
    """Two distinct kets would land on the same ket, so the map is not unitary there."""


class IsometryFloor(QukitError):
    pass


class NotInteger(QukitError):
    pass


class DimensionMismatch(QukitError):
    pass


class NotAPower(QukitError):
    pass


class PartOutOfRange(QukitError):
    pass


class AlphaOutOfRange(QukitError):
    pass
