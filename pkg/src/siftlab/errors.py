"""Shared exception types.

Invalid arguments and malformed conditions raise ValueError, overflow of
fixed-width intermediates raises OverflowError; only the budget failure
needs its own class so the command line can map it to a distinct exit code.
"""


class ResourceBudgetError(RuntimeError):
    """A computation exceeded its declared memory or time budget."""
