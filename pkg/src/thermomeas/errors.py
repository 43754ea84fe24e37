"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An object failed a structural check (shape, Hermiticity, normalization, ...).

    Messages name the violated check and the measured defect magnitude.
    """


class PreconditionError(ValueError):
    """An operation was called on inputs outside its mathematical domain.

    Raised e.g. when a swap scheme is requested for an observable that does
    not commute with the Hamiltonian, or when a theorem check is applied to
    an instrument that does not satisfy the theorem's hypotheses.
    """
