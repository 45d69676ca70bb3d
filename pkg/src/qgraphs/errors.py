"""Exception types shared by the whole package."""


class InvalidInput(ValueError):
    """Raised when an argument violates a documented precondition."""


class ResourceLimit(RuntimeError):
    """Raised when an operation would exceed its documented size cap."""
