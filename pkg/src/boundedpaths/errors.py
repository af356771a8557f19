"""Exception types shared across the package."""


class EnumerationBudgetError(RuntimeError):
    """Raised when an exhaustive search exceeds its node budget.

    Truncation is never silent: either the enumeration completes within
    the budget or this error is raised.
    """


class AcceptanceTimeoutError(RuntimeError):
    """Raised when a rejection sampler exhausts its attempt budget.

    Carries the partial tally so callers can report what was gathered.
    """

    def __init__(self, message, accepted=0, attempts=0):
        super().__init__(message)
        self.accepted = accepted
        self.attempts = attempts


class StepCollapseError(RuntimeError):
    """Raised when the boundary step-shrink of the disk diffusion bottoms
    out and the proposal still lands essentially on the unit circle."""


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature cannot meet its tolerance within
    the subdivision budget."""
