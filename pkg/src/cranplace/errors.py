"""Exception types shared across the package."""


class CranplaceError(Exception):
    """Base class for all package errors."""


class StabilityViolation(CranplaceError):
    """A queue would be driven at or beyond its service rate."""

    def __init__(self, msg, where=None):
        super().__init__(msg)
        self.where = where


class NoPath(CranplaceError):
    """Destination unreachable from source."""


class BudgetExceeded(CranplaceError):
    """Instance too large for the exact solver's search budget."""


class InfeasibleError(CranplaceError):
    """No placement satisfies all constraints."""


class ScenarioError(CranplaceError):
    """Malformed scenario input."""
