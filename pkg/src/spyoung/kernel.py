"""Christoffel-Darboux correlation kernel on the symmetric lattice u = i/n.

The kernel is assembled from weighted orthonormal values
phi_m(u) = g_m(u) sqrt(u^2 W(u)), which stay O(1) across the lattice, so the
three-term recurrence on phi is the workhorse at any K.

Normalization.  ``cd_kernel`` carries the correlation normalization (the
factor-2 form): restricted to positive coordinates it is the orthogonal
projection whose determinants reproduce the exact measure, and its diagonal is
the particle density.  ``kernel_matrix`` lives on the full symmetric lattice
and drops that factor 2 (each point pairs with its mirror image), which is the
normalization making the symmetric-lattice matrix idempotent with trace n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ResourceLimitError
from .measure import ParticleConfig
from .orthopoly import norm_sequence, second_moment
from .params import EnsembleParams

MATRIX_GUARD = 4096
NEAR_DIAGONAL = 1e-8


@lru_cache(maxsize=8)
def _context(params: EnsembleParams) -> "KernelContext":
    return KernelContext(params)


class KernelContext:
    """Precomputed lattice data: weights, phi table, and the CD prefactor."""

    def __init__(self, params: EnsembleParams):
        params.require_symmetric("kernel evaluation")
        n, K = params.n, params.K
        half = K // 2
        self.params = params
        self.idx = np.arange(-half, half + 1)
        self.u = self.idx / float(n)
        lgk = math.lgamma(K + 1)
        logw = np.array(
            [
                lgk - math.lgamma(half + i + 1) - math.lgamma(half - i + 1)
                for i in self.idx
            ]
        ) - K * math.log(2.0)
        with np.errstate(divide="ignore"):
            log_wt = np.where(self.idx == 0, -np.inf, 2.0 * np.log(np.abs(self.u)) + logw)
        self.wtilde = np.exp(log_wt)
        norms = norm_sequence(params, 2 * n)
        self.lam = np.array([float(v) for v in norms.Lambda])
        self.beta = np.array([float(v) for v in norms.beta])
        atil = np.sqrt(self.beta)
        lam0 = float(second_moment(params))
        phi = np.empty((2 * n + 1, self.idx.size))
        phi[0] = np.sqrt(self.wtilde) / math.sqrt(lam0)
        phi[1] = self.u * phi[0] / atil[1]
        for m in range(1, 2 * n):
            phi[m + 1] = (self.u * phi[m] - atil[m] * phi[m - 1]) / atil[m + 1]
        self.phi = phi
        self.cd_prefactor = float(atil[2 * n] * atil[2 * n - 1])

    def lattice_index(self, u: float) -> int:
        pos = u * self.params.n
        i = int(round(pos))
        if abs(pos - i) > 1e-9 or abs(i) > self.params.K // 2:
            raise DomainError(f"{u} is not a lattice point i/n")
        return i + self.params.K // 2

    def pair_value(self, ii: int, jj: int) -> float:
        """Correlation kernel between lattice slots (factor-2 normalization)."""
        n = self.params.n
        ui, uj = self.u[ii], self.u[jj]
        du = ui * ui - uj * uj
        if abs(du) < NEAR_DIAGONAL * max(1.0, ui * ui):
            even = self.phi[0 : 2 * n : 2]
            return 2.0 * float(even[:, ii] @ even[:, jj])
        num = (
            self.phi[2 * n, ii] * self.phi[2 * n - 2, jj]
            - self.phi[2 * n - 2, ii] * self.phi[2 * n, jj]
        )
        return 2.0 * self.cd_prefactor * num / du

    def pair_value_sum(self, ii: int, jj: int) -> float:
        n = self.params.n
        even = self.phi[0 : 2 * n : 2]
        return 2.0 * float(even[:, ii] @ even[:, jj])


def cd_kernel(u: float, v: float, params: EnsembleParams) -> float:
    """Correlation kernel K(u, v) at lattice points (correlation normalization).

    Uses the two-term Christoffel-Darboux ratio away from the diagonal and the
    even-polynomial sum within the near-diagonal guard band (including v = -u,
    where u^2 = v^2 exactly).
    """
    ctx = _context(params)
    return ctx.pair_value(ctx.lattice_index(u), ctx.lattice_index(v))


def cd_kernel_sum(u: float, v: float, params: EnsembleParams) -> float:
    """Same kernel through the n-term sum; equal to ``cd_kernel`` everywhere."""
    ctx = _context(params)
    return ctx.pair_value_sum(ctx.lattice_index(u), ctx.lattice_index(v))


def density(a: int, params: EnsembleParams) -> float:
    """One-point density rho(a) = K(a/n, a/n) at integer particle coordinate a."""
    if not 1 <= a <= params.lattice_max:
        raise DomainError(f"particle coordinate must lie in 1..{params.lattice_max}")
    ctx = _context(params)
    ii = a + params.K // 2
    return ctx.pair_value_sum(ii, ii)


def correlation_matrix(config: ParticleConfig, params: EnsembleParams) -> np.ndarray:
    """Matrix [K(a_i/n, a_j/n)] over a particle configuration."""
    ctx = _context(params)
    slots = [a + params.K // 2 for a in config.coords]
    m = np.empty((len(slots), len(slots)))
    for x, ii in enumerate(slots):
        for y, jj in enumerate(slots):
            m[x, y] = ctx.pair_value(ii, jj)
    return m


@dataclass(frozen=True)
class KernelMatrix:
    """Projection form of the kernel on the full symmetric lattice."""

    params: EnsembleParams
    lattice: np.ndarray
    values: np.ndarray

    def trace(self) -> float:
        return float(np.trace(self.values))

    def idempotence_residual(self) -> float:
        return float(np.max(np.abs(self.values @ self.values - self.values)))

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.values - self.values.T)))


def kernel_matrix(params: EnsembleParams) -> KernelMatrix:
    """Full symmetric-lattice matrix (projection normalization, trace n)."""
    if params.lattice_max > MATRIX_GUARD:
        raise ResourceLimitError(f"lattice size {params.lattice_max} exceeds the guard")
    ctx = _context(params)
    even = ctx.phi[0 : 2 * params.n : 2]
    values = even.T @ even
    return KernelMatrix(params, ctx.u.copy(), values)
