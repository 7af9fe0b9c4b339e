"""Exception hierarchy shared by all modules."""


class RecipSumsError(ValueError):
    """Base class for every error raised by this package."""


class NotPrime(RecipSumsError):
    pass


class ZeroInverse(RecipSumsError):
    pass


class ZeroDenominator(RecipSumsError):
    pass


class BadCharacter(RecipSumsError):
    pass


class BadPolynomial(RecipSumsError):
    pass


class BadBounds(RecipSumsError):
    pass


class NotConvex(RecipSumsError):
    pass


class OutOfBox(RecipSumsError):
    pass


class BadWeights(RecipSumsError):
    pass


class WeightTooShort(RecipSumsError):
    pass


class ZeroLeadingCoeff(RecipSumsError):
    pass


class DegreeTooSmall(RecipSumsError):
    pass


class RangeTooLarge(RecipSumsError):
    """A computation would exceed its configured work cap."""


class EmptyPrimeSet(RecipSumsError):
    pass


class PreconditionFailed(RecipSumsError):
    pass


class BadDegree(RecipSumsError):
    pass


class BadK(RecipSumsError):
    pass


class ConfigError(RecipSumsError):
    """Configuration text could not be parsed; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
