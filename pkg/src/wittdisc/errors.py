"""Shared exception types.

DomainError signals bad input (mismatched parents, invalid diagrams),
CapExceeded signals a carrier or enumeration growing past the configured
resource cap, and InternalCheckError signals a violated internal theorem
(e.g. an inexact division in the ghost recursion) -- always a bug, never
a user error.
"""


class DomainError(ValueError):
    """Invalid input for an operation (wrong parent, non-composable maps...)."""


class CapExceeded(RuntimeError):
    """A carrier, hom search or table would exceed the configured cap."""


class InternalCheckError(RuntimeError):
    """An identity that is a theorem failed to hold; indicates a bug."""
