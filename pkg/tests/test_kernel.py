import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import binomial_weight, gram_schmidt_orthonormal_sq
from spyoung import kernel
from spyoung.errors import DomainError, ResourceLimitError
from spyoung.measure import config_for, enumerate_measure
from spyoung.orthopoly import christoffel_transform, norm_sequence
from spyoung.params import EnsembleParams


def test_one_by_one_densities():
    p11 = EnsembleParams(1, 1)
    assert abs(kernel.density(1, p11) - 0.5) < 1e-12
    assert abs(kernel.density(2, p11) - 0.5) < 1e-12


def test_density_domain():
    p = EnsembleParams(2, 2)
    with pytest.raises(DomainError):
        kernel.density(0, p)
    with pytest.raises(DomainError):
        kernel.density(5, p)


def test_off_lattice_rejected():
    p = EnsembleParams(2, 2)
    with pytest.raises(DomainError):
        kernel.cd_kernel(0.3, 1.0, p)


@pytest.mark.parametrize("n,k", [(1, 1), (2, 2), (3, 2), (2, 3), (3, 3)])
def test_determinants_reproduce_measure(n, k):
    params = EnsembleParams(n, k)
    for lam, mu in enumerate_measure(params):
        m = kernel.correlation_matrix(config_for(lam, params), params)
        assert abs(float(np.linalg.det(m)) - float(mu)) < 1e-10


def test_projection_at_eight_by_eight():
    km = kernel.kernel_matrix(EnsembleParams(8, 8))
    assert km.idempotence_residual() < 1e-8
    assert abs(km.trace() - 8) < 1e-8
    assert km.symmetry_residual() == 0.0


def test_matrix_guard():
    with pytest.raises(ResourceLimitError):
        kernel.kernel_matrix(EnsembleParams(2500, 2500))


def test_cd_ratio_equals_sum_form():
    params = EnsembleParams(8, 8)
    n, L = params.n, params.lattice_max
    rng = np.random.default_rng(1)
    checked = 0
    while checked < 200:
        i = int(rng.integers(-L, L + 1))
        j = int(rng.integers(-L, L + 1))
        if i * i == j * j:
            continue
        a = kernel.cd_kernel(i / n, j / n, params)
        b = kernel.cd_kernel_sum(i / n, j / n, params)
        scale = max(
            abs(b),
            math.sqrt(
                kernel.cd_kernel_sum(i / n, i / n, params)
                * kernel.cd_kernel_sum(j / n, j / n, params)
            ),
        )
        assert abs(a - b) <= 1e-9 * scale
        checked += 1


def test_kernel_symmetric_in_arguments():
    params = EnsembleParams(3, 4)
    rng = np.random.default_rng(2)
    n, L = params.n, params.lattice_max
    for _ in range(50):
        i = int(rng.integers(-L, L + 1))
        j = int(rng.integers(-L, L + 1))
        assert kernel.cd_kernel(i / n, j / n, params) == pytest.approx(
            kernel.cd_kernel(j / n, i / n, params), abs=1e-15
        )


def test_density_bounds_and_trace():
    params = EnsembleParams(8, 8)
    vals = [kernel.density(a, params) for a in range(1, params.lattice_max + 1)]
    assert all(-1e-12 <= v <= 1 + 1e-12 for v in vals)
    assert abs(sum(vals) - params.n) < 1e-8


def test_even_polynomial_pullback_against_gram_schmidt():
    # p_m(u^2) = sqrt(2) g_{2m}(u): compare squares exactly against an
    # independent Gram-Schmidt construction on the squared lattice.
    params = EnsembleParams(2, 3)  # K = 10
    n, K = params.n, params.K
    pts = [Fraction(i * i, n * n) for i in range(0, K // 2 + 1)]
    wts = [Fraction(i * i, n * n) * binomial_weight(i, K) for i in range(0, K // 2 + 1)]
    sq = gram_schmidt_orthonormal_sq(pts, wts, params.n + 1)
    ns = norm_sequence(params, 2 * params.n)
    for m in range(params.n + 1):
        g = christoffel_transform(2 * m, params)
        for i in range(1, K // 2 + 1):
            u = Fraction(i, n)
            lhs = sq(m, u * u)  # p_m(u^2)^2
            rhs = 2 * g(u) ** 2 / ns.Lambda[2 * m]  # (sqrt(2) g_{2m}(u))^2
            assert lhs == rhs
