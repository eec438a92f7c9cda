"""Exception types shared across the library.

Every failure mode that callers are expected to catch gets its own class so
that tests can assert on the exact condition rather than parsing messages.
"""


class SwapcombError(Exception):
    """Base class for all library-specific errors."""


class EmptySupport(SwapcombError):
    """A policy with no support atoms was passed where a distribution is required."""


class NotPSD(SwapcombError):
    """A matrix required to be positive semidefinite has a significantly negative eigenvalue."""


class InfeasibleDomain(SwapcombError):
    """The action set is empty (e.g. a disconnected graph for spanning trees)."""


class TooLarge(SwapcombError):
    """Enumeration was requested but the counted action set exceeds the cap."""

    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"action set has {count} elements, enumeration cap is {cap}")


class DegenerateSet(SwapcombError):
    """The action set spans a zero-dimensional subspace; no spanner exists."""


class NotInHull(SwapcombError):
    """Decomposition stalled: the target point is not in the convex hull (residual too large)."""

    def __init__(self, residual, message=""):
        self.residual = residual
        super().__init__(message or f"decomposition stalled with residual {residual:.3e}")


class NoConvergence(SwapcombError):
    """Cyclic projection hit its cycle cap while the constraint residual was still large."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"projection did not converge; final residual {residual:.3e}")


class OmdPreconditionViolated(SwapcombError):
    """The mirror-descent boundedness condition eta*||X||_inf <= 1 failed.

    Signals mis-tuned practical parameters; the run aborts and the message
    carries enough context to locate the offending meta-day.
    """

    def __init__(self, value, context=""):
        self.value = value
        msg = f"eta*||X||_inf = {value:.6g} > 1"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class ConfigError(SwapcombError):
    """Experiment configuration failed validation; message names the field."""
