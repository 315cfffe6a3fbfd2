"""Exception hierarchy shared by all modules."""


class LegvarError(Exception):
    """Base class for library errors."""


class DimensionError(LegvarError, ValueError):
    pass


class StructureError(LegvarError, ValueError):
    pass


class DegreeError(LegvarError, ValueError):
    pass


class ArgumentError(LegvarError, ValueError):
    pass


class UndefinedInputError(LegvarError, ValueError):
    pass


class MembershipError(LegvarError, ValueError):
    """A point does not lie on the scheme it was expected to lie on."""


class StratumError(LegvarError, ValueError):
    pass


class SamplingExhausted(LegvarError, RuntimeError):
    pass


class InconclusiveError(LegvarError, RuntimeError):
    """A check could not reach a verdict (never a negative verdict)."""


class DegenerateCurveError(LegvarError, ValueError):
    """A curve never leaves its centre, so it has no limit direction."""
