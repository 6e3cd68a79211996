"""Exception hierarchy shared by every module."""


class PumError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(PumError, ValueError):
    """Bad arguments: mismatched shapes, mixed fields, out-of-range symbols."""


class DomainError(PumError, ValueError):
    """Mathematically undefined request, e.g. inverting zero."""


class ConstructionError(PumError, ValueError):
    """Code parameters violate a construction constraint."""


class InconsistentSystemError(PumError):
    """A linear system has no solution."""


class ScaleGuardError(PumError):
    """A brute-force computation would exceed the desk-scale limits."""


class SamplingError(PumError):
    """Rejection sampling gave up."""
