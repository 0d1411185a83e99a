"""Exceptions shared across evaluation modules."""


class EmptyCohort(ValueError):
    """Raised when an aggregate is requested over zero usable items."""
