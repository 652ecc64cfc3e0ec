"""Exception types shared across the package."""


class MeanKingError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(MeanKingError, ValueError):
    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class DegreeTooLarge(MeanKingError, ValueError):
    pass


class DivisionByZero(MeanKingError, ZeroDivisionError):
    pass


class DimMismatch(MeanKingError, ValueError):
    pass


class NotSquare(MeanKingError, ValueError):
    pass


class UnsupportedDimension(MeanKingError, ValueError):
    def __init__(self, d, reason=None):
        msg = f"no built-in construction for dimension {d}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.d = d


class ParseError(MeanKingError, ValueError):
    pass


class ShapeError(MeanKingError, ValueError):
    pass


class InvalidFamily(MeanKingError, ValueError):
    def __init__(self, report):
        super().__init__(f"not a valid MUB family: {report.summary()}")
        self.report = report


class InvalidTable(MeanKingError, ValueError):
    def __init__(self, report):
        super().__init__(f"not a valid striation table: {report.summary()}")
        self.report = report


class SearchBoundExceeded(MeanKingError, ValueError):
    pass
