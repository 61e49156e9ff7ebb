"""Exception hierarchy shared by all modules."""


class QocError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QocError, ValueError):
    """Input outside the domain of an operation (non-finite, non-positive, wrong regime...)."""


class IntegrationError(QocError, RuntimeError):
    """Numerical integration could not finish (step-size underflow, solver failure)."""


class EulerSingularityError(IntegrationError):
    """The Euler-angle chart became singular (|cos tau1| -> 0)."""

    def __init__(self, time: float, tau1: float):
        self.time = time
        self.tau1 = tau1
        super().__init__(
            f"Euler-angle coordinate singularity at t={time:.6g}: "
            f"tau1={tau1:.6g} (cos tau1 -> 0)"
        )


class ConsistencyError(QocError, RuntimeError):
    """An internal cross-check failed; this indicates a bug, not a valid outcome."""
