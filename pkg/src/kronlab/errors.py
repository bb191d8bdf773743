"""Exception types raised across the package."""


class KronlabError(Exception):
    """Base class for all package errors."""


class DomainError(KronlabError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class TailDiverges(KronlabError):
    """A series tail cannot be bounded below the requested tolerance."""


class PrecisionExhausted(KronlabError):
    """Working precision is too low to separate the quantities involved."""


class BudgetExceeded(KronlabError):
    """A search would exceed its configured enumeration budget."""


class OutOfRange(KronlabError, IndexError):
    """A lookup falls outside the computed range of a table."""


class InsufficientData(KronlabError):
    """Too few records to form an estimate."""


class NotSquarefree(DomainError):
    pass


class SeedInvalid(KronlabError):
    """The seed point does not satisfy the starting inequality."""


class DepthExceeded(KronlabError):
    """The best-approximation list is too short for the requested construction."""


class InsufficientDepth(DepthExceeded):
    pass


class EmptyConstruction(KronlabError):
    pass


class RangeError(KronlabError, ValueError):
    """Requested range lies outside the certified window."""


class QuadratureUnstable(KronlabError):
    """Successive quadrature refinements fail to agree."""


class BadWindow(DomainError):
    """Window endpoints a/q, (a+1)/q violate the coprimality condition."""


class PhiInadmissible(DomainError):
    """The growth function fails the integrability test."""
