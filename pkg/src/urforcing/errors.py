class UrforcingError(Exception):
    """Base class; ``code`` is the stable identifier reported by the CLI."""

    code = "ERROR"


class BudgetExceeded(UrforcingError):
    code = "BUDGET_EXCEEDED"
