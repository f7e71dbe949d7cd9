"""Exceptions shared across the package."""


class ValidationError(ValueError):
    """An input failed its structural or numerical invariants."""


class SolverError(RuntimeError):
    """The LP solver could not certify a result."""
