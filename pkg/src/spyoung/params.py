"""Shared ensemble parameters for the n x k box."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateParameterError, DomainError

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class EnsembleParams:
    """Geometry of the ensemble: the diagram box is n x k.

    Derived constants: ``K = 2n + 2k`` (number of Bernoulli trials behind the
    lattice weight) and ``H = n/K``, an exact rational in (0, 1/2).  ``p`` is
    the Bernoulli parameter of the bit matrix; everything probabilistic
    (sampling, measures, kernels) requires p = 1/2, while the polynomial
    machinery accepts any p in (0, 1).
    """

    n: int
    k: int
    p: Fraction = HALF

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise DomainError(f"k must be a positive integer, got {self.k!r}")
        p = Fraction(self.p)
        if not (0 < p < 1):
            raise DomainError(f"p must lie in (0, 1), got {self.p}")
        object.__setattr__(self, "p", p)

    @property
    def K(self) -> int:
        return 2 * (self.n + self.k)

    @property
    def H(self) -> Fraction:
        return Fraction(self.n, self.K)

    @property
    def lattice_max(self) -> int:
        """Largest positive lattice index: particles live on 1..n+k."""
        return self.n + self.k

    def require_symmetric(self, what: str) -> None:
        """Raise unless p = 1/2 (needed wherever probabilities are involved)."""
        if self.p != HALF:
            raise DegenerateParameterError(f"{what} requires p = 1/2, got p = {self.p}")
