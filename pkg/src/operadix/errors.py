"""Exception types shared by all modules."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class InconsistencyError(RuntimeError):
    """An internal self-check failed."""
