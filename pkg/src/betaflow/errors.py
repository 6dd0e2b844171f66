"""Exception hierarchy shared across the package."""


class BetaflowError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BetaflowError, ValueError):
    """A point, argument, or inversion target lies outside the valid domain."""


class SingularMatrixError(BetaflowError, ArithmeticError):
    """A 3x3 system is singular within tolerance (metric degeneracy included)."""


class DegenerateEtaError(BetaflowError, ZeroDivisionError):
    """eta1 or eta2 vanishes, so ratios of dual coordinates are undefined."""


class NegativeRatioError(BetaflowError, ValueError):
    """eta3/eta1 < 0, so the Lax off-diagonal square root leaves the reals."""


class NoConvergenceError(BetaflowError, RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class StepFailureError(BetaflowError, RuntimeError):
    """The adaptive integrator's step size underflowed."""


class EmptyTrajectoryError(BetaflowError, ValueError):
    """An operation needs at least two trajectory samples."""


class UnknownSuiteError(BetaflowError, ValueError):
    """run_suite was asked for a suite name it does not know."""
