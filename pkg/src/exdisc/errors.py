"""Exception hierarchy shared by all exdisc modules."""


class ExdiscError(ValueError):
    """Base class for every error raised by the library."""


class EmptySet(ExdiscError):
    pass


class OutOfRange(ExdiscError):
    pass


class DeltaOutOfRange(ExdiscError):
    pass


class MalformedInterval(ExdiscError):
    pass


class NegativeValues(ExdiscError):
    pass


class InvalidExponent(ExdiscError):
    pass


class ToleranceInvalid(ExdiscError):
    pass


class HypothesisViolated(ExdiscError):
    """Input does not satisfy the hypotheses of the inequality being checked."""


class ParseError(ExdiscError):
    pass
