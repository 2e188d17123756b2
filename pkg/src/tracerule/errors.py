"""Exception types raised across the package."""


class TraceRuleError(ValueError):
    """Base class for all domain errors."""


class DimensionMismatch(TraceRuleError):
    pass


class NotHermitian(TraceRuleError):
    pass


class NotUnitTrace(TraceRuleError):
    pass


class GramSingular(TraceRuleError):
    """The operators handed to :func:`solve_dual` are (numerically) linearly dependent."""


class SignallingInput(TraceRuleError):
    pass


class InvalidPovm(TraceRuleError):
    pass


class NonOrthonormal(TraceRuleError):
    pass


class IndependenceFailure(TraceRuleError):
    """No linearly independent measurement family was found after the redraw budget."""


class DegenerateBasis(TraceRuleError):
    pass


class RangeViolation(TraceRuleError):
    pass


class InvalidBox(TraceRuleError):
    pass
