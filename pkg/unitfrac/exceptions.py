"""
Exception hierarchy shared by the solvers, the CLI and the HTTP layer
"""


class UnitFracError(Exception):
    """Base class for every error raised by unitfrac"""


class ResourceLimitError(UnitFracError):
    """
    A configured work budget was exhausted: factorization iterations,
    divisor count cap, or the supported integer width.
    Callers treat this as "inconclusive", never as "no solution".
    """


class ConditionViolationError(UnitFracError, ValueError):
    """The parameters do not satisfy a family's or a search's precondition"""


class ResidueMismatchError(ConditionViolationError):
    """n is in the wrong residue class for the requested closed form"""


class VerificationError(UnitFracError):
    """A generated triple failed the exact check n(xy+yz+zx) = 4xyz"""
