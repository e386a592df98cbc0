class InvariantViolation(RuntimeError):
    """A checked mathematical identity failed on concrete input."""


class SearchBudgetExceeded(RuntimeError):
    """An exhaustive search ran past its configured node budget."""
