"""Exception types shared across the library."""


class InvalidArgument(ValueError):
    """Bad input: wrong shape, out-of-range index, non-finite data."""


class ContractViolation(ValueError):
    """Input fails a structural precondition (non-hermitian, non-orthonormal)."""


class ImpossibleOutcome(ValueError):
    """A measurement outcome with zero Born probability was requested."""


class OutOfScope(ValueError):
    """Parameters that describe physics this library does not model."""


class ResourceLimit(RuntimeError):
    """A dimension cap would be exceeded."""
