"""Exception types shared across the package."""

from __future__ import annotations


class CohomlabError(Exception):
    """Base class for all package errors."""


class UsageError(CohomlabError, ValueError):
    """Bad arguments: unsupported q, mismatched dimensions, wrong module kind."""


class ConsistencyError(CohomlabError, RuntimeError):
    """An internal cross-check failed; results cannot be trusted."""


class ContractViolation(CohomlabError, ValueError):
    """A precondition on mathematical input does not hold (e.g. not a submodule)."""


class GuardError(CohomlabError):
    """A bar-resolution request exceeds the group-order guard."""

    def __init__(self, order: int, guard: int):
        self.order = order
        self.guard = guard
        super().__init__(
            f"bar resolution on a group of order {order} exceeds guard {guard}; "
            f"the normalized complex has {(order - 1) ** 3} rows in degree 3. "
            f"Pass an explicit guard override (--guard-order {order}) to run it anyway."
        )


class InconsistentSystem(CohomlabError):
    """An affine system a.u = b has no solution.

    ``rank`` is the rank of ``a`` and ``augmented_rank`` that of ``[a | b]``;
    the latter is always ``rank + 1``.
    """

    def __init__(self, rank: int, augmented_rank: int):
        self.rank = rank
        self.augmented_rank = augmented_rank
        super().__init__(f"inconsistent system: rank {rank}, augmented rank {augmented_rank}")
