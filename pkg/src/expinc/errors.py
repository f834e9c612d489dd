"""Exception hierarchy shared by all expinc modules."""


class ExpincError(ValueError):
    """Base class for every error raised by expinc."""


# dataset
class MissingColumn(ExpincError):
    pass


class NonMonotoneThresholds(ExpincError):
    pass


class NonMonotoneFractions(ExpincError):
    pass


class NonMonotoneInput(ExpincError):
    pass


class FractionOutOfRange(ExpincError):
    pass


class TooFewRows(ExpincError):
    pass


class InvalidRecord(ExpincError):
    pass


# regress
class DegenerateX(ExpincError):
    pass


class DegenerateY(ExpincError):
    pass


class LengthMismatch(ExpincError):
    pass


class TooFewPoints(ExpincError):
    pass


class InvalidDf(ExpincError):
    pass


# expofit
class ZeroFraction(ExpincError):
    pass


class AllPointsBelowMu(ExpincError):
    pass


class NotExponentialDecay(ExpincError):
    pass


class NoNegativeCorrelation(ExpincError):
    pass


class NonConvergent(ExpincError):
    pass


class InvalidConfig(ExpincError):
    pass


# allocsim
class ConstraintViolation(ExpincError):
    pass


class SearchSpaceTooLarge(ExpincError):
    pass


class EmptyInput(ExpincError):
    pass


class BelowSupport(ExpincError):
    pass


class NegativeSigma(ExpincError):
    pass


# econ
class InvalidLaw(ExpincError):
    pass


class InvalidRate(ExpincError):
    pass


class UnknownYear(ExpincError):
    pass
