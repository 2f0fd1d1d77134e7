"""Exception hierarchy.

Two families matter to callers: ``ValidationError`` (bad input, CLI exit
code 1) and ``NumericalError`` (the math broke down, CLI exit code 2).
"""


class RBFourierError(Exception):
    pass


class ValidationError(RBFourierError, ValueError):
    pass


class NumericalError(RBFourierError, ArithmeticError):
    pass


# group-core
class ClosureOverflow(NumericalError):
    pass


class NonUnitaryGenerator(ValidationError):
    pass


class UnknownLabel(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# reps
class NonUnitaryInput(ValidationError):
    pass


class BadBasis(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


# fourier
class TableMismatch(ValidationError):
    pass


class IncompleteSpectrum(ValidationError):
    pass


# rb-engine
class InsufficientData(ValidationError):
    pass


class FitDiverged(NumericalError):
    pass


# gauge
class IdealNotRankOne(ValidationError):
    pass


class DegenerateDominantEigenvalue(NumericalError):
    pass


class ComplexDominantEigenvalue(NumericalError):
    pass


class SingularGauge(NumericalError):
    pass


# cli
class ParseError(ValidationError):
    pass
