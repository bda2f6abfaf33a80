"""Exception types shared across the package."""


class CobexError(Exception):
    """Base class for all package errors."""


class EmptyInput(CobexError):
    pass


class NotPure(CobexError):
    """Facets of unequal cardinality (or a non-pure induced subcomplex)."""


class UnknownVertex(CobexError):
    pass


class FaceNotFound(CobexError):
    pass


class DimensionMismatch(CobexError):
    pass


class Inconsistent(CobexError):
    """A linear system over GF(2) has no solution."""


class BudgetExceeded(CobexError):
    """An enumeration would exceed the configured budget cap."""

    def __init__(self, message, required=None, cap=None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class FillFailed(CobexError):
    """A filling chain could not be constructed: low homology does not vanish."""

    def __init__(self, message, s=None, tau=None):
        super().__init__(message)
        self.s = s
        self.tau = tau


class MissingChain(CobexError):
    pass


class DivisibilityViolated(CobexError):
    pass


class NotAMatroid(CobexError):
    pass


class NotBasisTransitive(CobexError):
    pass


class NonPrimeField(CobexError):
    pass
