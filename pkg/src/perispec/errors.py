"""Exception types shared across the package."""


class PerispecError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(PerispecError):
    """Parameters violate a documented precondition."""


class NonConvergent(PerispecError):
    """A series evaluation did not converge under the stopping rule."""


class AccuracyNotReached(PerispecError):
    """Quadrature error estimate exceeds the requested tolerance."""


class ZeroFrequency(PerispecError):
    """An operation requiring a nonzero frequency vector got zero."""


class ZeroMode(PerispecError):
    """The k = 0 torus mode has no transverse eigenfields."""


class SingularMode(PerispecError):
    """Right-hand side has a nonzero mean; the zero mode is not invertible."""


class DegenerateEigenvalue(PerispecError):
    """An eigenvalue in the requested mode range is numerically zero."""
