"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`EspritKitError`,
and most also derive from a builtin (``ValueError`` / ``RuntimeError``) so callers
that only know the builtins still catch them.
"""


class EspritKitError(Exception):
    """Base class for all package errors."""


# -- input validation -------------------------------------------------------

class LengthMismatch(EspritKitError, ValueError):
    pass


class OutOfRangeLocation(EspritKitError, ValueError):
    pass


class NonPositiveIntensity(EspritKitError, ValueError):
    pass


class ZeroSeparation(EspritKitError, ValueError):
    pass


class InvalidRank(EspritKitError, ValueError):
    pass


class NotSquare(EspritKitError, ValueError):
    pass


class ShapeMismatch(EspritKitError, ValueError):
    pass


class NotOrthonormal(EspritKitError, ValueError):
    pass


class NotPowerOfTwo(EspritKitError, ValueError):
    pass


class TooLarge(EspritKitError, ValueError):
    pass


class PreconditionViolated(EspritKitError, ValueError):
    pass


class NearCoincident(EspritKitError, ValueError):
    pass


class ConfigInvalid(EspritKitError, ValueError):
    pass


class SignalFormatError(EspritKitError, ValueError):
    pass


class InsufficientData(EspritKitError, ValueError):
    pass


# -- numerical failures -----------------------------------------------------

class NumericalFailure(EspritKitError, RuntimeError):
    """Raised when a numerical routine cannot deliver its contract."""


class ConvergenceFailure(NumericalFailure):
    pass


class RankDeficient(NumericalFailure):
    pass


class RankDeficientUpBlock(RankDeficient):
    """The first-rows block of the dominant eigenvectors lost column rank."""


class SolverFailure(NumericalFailure):
    pass


class GapNonpositive(NumericalFailure):
    pass


class OracleViolation(NumericalFailure):
    """A runtime-checked inequality did not hold."""
