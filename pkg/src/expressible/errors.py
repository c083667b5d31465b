"""Exception hierarchy shared by every module of the package."""


class ExpressibleError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ExpressibleError, ValueError):
    """A specification or configuration is malformed."""


class DepthExceededError(ExpressibleError):
    """An exact integer would exceed the configured decimal digit budget."""


class InconsistentSpecError(ValidationError):
    """Sequence and digit specifications cannot be combined as requested."""


class DegenerateDigitSetError(ExpressibleError):
    """An operation needs at least two digits at a level but got fewer."""


class BudgetExceededError(ExpressibleError):
    """An enumeration would produce more items than the configured budget."""

    def __init__(self, count, budget):
        super().__init__(f"enumeration of {count} items exceeds budget {budget}")
        self.count = count
        self.budget = budget


class NotApplicableError(ExpressibleError):
    """A ratio or bound is undefined for the given inputs."""


class InsufficientDataError(ExpressibleError):
    """Too few data points for a regression."""


class HypothesisViolationError(ExpressibleError):
    """A theorem hypothesis (for instance a gap condition) was refuted."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotFoundError(ExpressibleError):
    """A search range was exhausted without success."""
