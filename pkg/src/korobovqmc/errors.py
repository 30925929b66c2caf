"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates an operation's stated precondition."""


class CapacityError(RuntimeError):
    """A request exceeds the supported integer width or scan/expansion budget."""
