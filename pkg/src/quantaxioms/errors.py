"""Exception hierarchy shared by every module of the package."""


class QuantError(ValueError):
    """Base class for all domain errors raised by quantaxioms."""


class InvalidPrevalence(QuantError):
    """A vector of numbers is not a valid prevalence vector."""


class NegativeEntry(InvalidPrevalence):
    pass


class NotNormalized(InvalidPrevalence):
    pass


class DimensionMismatch(QuantError):
    pass


class InvalidCodeframe(QuantError):
    pass


class ZeroMass(QuantError):
    """Projection onto a sub-codeframe that carries no probability mass."""


class NotBinary(QuantError):
    pass


class UndefinedValue(QuantError):
    """A measure hit a zero denominator or log(0) with smoothing disabled."""


class UnsupportedMeasure(QuantError):
    pass


class IncompatiblePair(QuantError):
    """The requested (measure, property, codeframe size) combination is meaningless."""


class NoFixedScenario(QuantError):
    pass


class HypothesisViolation(QuantError):
    """A scenario does not satisfy the hypothesis of the property it targets."""


class DomainError(QuantError):
    pass


class EmptyInput(QuantError):
    pass


class MixedCodeframes(QuantError):
    pass


class ParseError(QuantError):
    def __init__(self, message: str, locus: str | None = None):
        self.locus = locus
        super().__init__(f"{locus}: {message}" if locus else message)
