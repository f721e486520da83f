"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula or construction is defined."""


class InapplicableBoundError(DomainError):
    """The requested bound does not apply at the given ``b``."""


class UnsupportedDimensionError(DomainError):
    pass


class NonUnimodalError(RuntimeError):
    """A bracketing search found a function that is not unimodal on its interval."""


class SamplingError(RuntimeError):
    pass


class RejectedInputError(ValueError):
    """Input violates a precondition of a check (the check itself did not fail)."""


class CoverageError(RuntimeError):
    """A constructed covering or partition left part of its domain unassigned."""
