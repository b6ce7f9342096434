"""Exception hierarchy shared by all modules."""


class MaxAlgebraError(ValueError):
    """Base class for library errors."""


class ShapeError(MaxAlgebraError):
    """Operand dimensions are incompatible."""


class PreconditionError(MaxAlgebraError):
    """A mathematical hypothesis required by an operation does not hold.

    The message names the failed hypothesis, e.g. ``"jsr(F) = 6/5 > 1"``.
    """


class EnumerationLimitError(MaxAlgebraError):
    """A brute-force enumeration would exceed its configured guard."""
