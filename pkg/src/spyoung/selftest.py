"""Aggregate invariant suite behind the ``selftest`` subcommand."""

from __future__ import annotations

import numpy as np

from .errors import SpyoungError
from .kernel import cd_kernel, cd_kernel_sum, correlation_matrix, kernel_matrix
from .measure import config_for, enumerate_measure, measure_explicit
from .orthopoly import (
    krawtchouk_zero_ratio,
    lambda_by_summation,
    norm_sequence,
    qr_step_squared_exact,
    ttr_from_polynomials,
)
from .params import EnsembleParams
from .tableaux import validate_bijection


def run(params: EnsembleParams, emit=print) -> bool:
    """Run the exact identity suite at the given size; True when all pass."""
    n, k = params.n, params.k
    checks: list[tuple[str, bool]] = []

    def check(name: str, fn) -> None:
        try:
            checks.append((name, bool(fn())))
        except SpyoungError as exc:
            emit(f"[FAIL] {name}: {exc}")
            checks.append((name, False))
            return
        emit(f"[{'PASS' if checks[-1][1] else 'FAIL'}] {name}")

    table = enumerate_measure(params)
    check("measure normalizes to 1", lambda: sum(p for _, p in table) == 1)
    check(
        "product formula == dimension formula",
        lambda: all(measure_explicit(config_for(l, params), params) == p for l, p in table),
    )
    if 2 * n * k <= 16:
        check("insertion bijection (exhaustive)", lambda: validate_bijection(params).total == 4**(n * k))

    max_m = min(2 * n, params.K - 3)
    norms = norm_sequence(params, max_m)
    check(
        "norm recurrence == direct summation",
        lambda: all(lambda_by_summation(m, params) == norms.Lambda[m] for m in range(max_m + 1)),
    )
    check(
        "origin-value ratio closed form",
        lambda: all(krawtchouk_zero_ratio(m, params) is not None for m in range(0, min(params.K - 2, 2 * n) + 1, 2)),
    )
    ah2, _ = qr_step_squared_exact(params, max_m)
    alphas, betas = ttr_from_polynomials(max_m - 1, params)
    check(
        "QR step == polynomial recurrence coefficients",
        lambda: all(ah2[m] == betas[m] for m in range(1, max_m - 1)) and all(a == 0 for a in alphas),
    )

    km = kernel_matrix(params)
    check("kernel projection (idempotent, trace n)",
          lambda: km.idempotence_residual() < 1e-8 and abs(km.trace() - n) < 1e-8)
    check(
        "determinants reproduce the measure",
        lambda: all(
            abs(float(np.linalg.det(correlation_matrix(config_for(l, params), params))) - float(p)) < 1e-10
            for l, p in table
        ),
    )

    rng = np.random.default_rng(7)
    L = params.lattice_max

    def cd_vs_sum() -> bool:
        # Relative to the local kernel scale; at exact zeros of the kernel a
        # literal relative comparison is ill-posed.
        for _ in range(100):
            i = int(rng.integers(-L, L + 1))
            j = int(rng.integers(-L, L + 1))
            if i * i == j * j:
                continue
            a = cd_kernel(i / n, j / n, params)
            b = cd_kernel_sum(i / n, j / n, params)
            scale = max(
                abs(b),
                (cd_kernel_sum(i / n, i / n, params) * cd_kernel_sum(j / n, j / n, params))
                ** 0.5,
            )
            if abs(a - b) > 1e-9 * scale:
                return False
        return True

    check("CD ratio form == sum form", cd_vs_sum)
    return all(ok for _, ok in checks)
