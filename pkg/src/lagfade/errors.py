"""Exception types shared across the package."""


class LagfadeError(Exception):
    """Base class for all lagfade errors."""


class DomainError(LagfadeError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DataError(LagfadeError, ValueError):
    """Malformed input data (samples, files, unsorted sequences)."""


class CapabilityError(LagfadeError, ValueError):
    """The request exceeds what the object supports (moment order, family/alpha pairing)."""


class FitError(LagfadeError, ValueError):
    """Moment matching is degenerate (e.g. zero-variance data)."""


class RangeError(LagfadeError, OverflowError):
    """The result would overflow the floating-point range."""


class ConvergenceError(LagfadeError, RuntimeError):
    """An iterative scheme hit its iteration or evaluation budget."""


class NumericalError(LagfadeError, ArithmeticError):
    """An accumulation produced a non-finite value."""
