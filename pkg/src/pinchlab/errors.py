"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the mathematically valid domain."""


class UnsupportedError(ValueError):
    """The input is outside the scope this toolkit models."""
