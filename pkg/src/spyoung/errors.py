"""Exception taxonomy shared across the package."""


class SpyoungError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SpyoungError, ValueError):
    """Input outside the mathematical domain of an operation."""


class TableauError(DomainError):
    """Malformed tableau or a violated tableau invariant."""


class RegionError(DomainError):
    """Asymptotic evaluation requested outside the oscillatory bulk."""


class DegenerateParameterError(DomainError):
    """Parameter combination for which the requested closed form degenerates."""


class BreakdownError(SpyoungError, ArithmeticError):
    """A recurrence or factorization broke down (vanishing pivot/norm)."""


class ConsistencyError(SpyoungError, ArithmeticError):
    """Two computations that must agree exactly failed to do so."""


class ResourceLimitError(SpyoungError, RuntimeError):
    """A guard against exponentially large enumerations or matrices fired."""
