"""Acceptance suite: the end-to-end exactness and convergence gates.

Each test prints one PASS line (visible with ``pytest -s``); tolerances are
pinned here and nowhere else.  The figure-scale pipeline test at the end is
the expensive one; it runs the full 500 x 10^4 replicated sampling on the
50 x 100 box and uses every available core.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from spyoung import asymptotics as asy
from spyoung import harness, kernel
from spyoung import orthopoly as op
from spyoung.cli import check_closed_form_table
from spyoung.measure import (
    box_shapes,
    config_for,
    enumerate_measure,
    measure_exact,
    measure_explicit,
    normalize_shape,
)
from spyoung.params import EnsembleParams
from spyoung.sampling import sample_shapes_array, stream
from spyoung.tableaux import validate_bijection


def _report(name: str, ok: bool, detail: str = "") -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_a1_closed_form_table_exact():
    t0 = time.perf_counter()
    boxes = {8: [(1, 3), (2, 2), (3, 1)], 12: [(1, 5), (3, 3), (5, 1)], 20: [(2, 8), (5, 5), (8, 2)]}
    ok = True
    for K, pairs in boxes.items():
        for n, k in pairs:
            params = EnsembleParams(n, k)
            assert params.K == K
            ok &= check_closed_form_table(params, emit=lambda s: None)
    dt = time.perf_counter() - t0
    _report("closed-form polynomial table, exact at K in {8,12,20}", ok and dt < 1.0,
            f"{dt:.2f}s")


def test_a2_origin_ratio_identity():
    t0 = time.perf_counter()
    ok = True
    for K in range(4, 65, 2):
        for n in (1, 3):
            k = (K - 2 * n) // 2
            if k < 1 or 2 * n + 2 * k != K:
                continue
            params = EnsembleParams(n, k)
            for m in range(0, K - 1, 2):
                ratio = op.krawtchouk_zero_ratio(m, params)  # raises on mismatch
                ok &= ratio == -Fraction((K - m) * (m + 1), 4 * n * n)
    dt = time.perf_counter() - t0
    _report("origin-value ratio identity, all even m <= K-2, K <= 64", ok and dt < 10.0,
            f"{dt:.2f}s")


def test_a3_qr_equals_polynomial_coefficients():
    params = EnsembleParams(16, 16)  # K = 64, H = 1/4
    ns = op.norm_sequence(params, 22)
    alphas, betas = op.ttr_from_polynomials(21, params)
    ah2_exact, r2 = op.qr_step_squared_exact(params, 22)
    ok = all(a == 0 for a in alphas)
    for m in range(1, 21):
        ok &= ah2_exact[m] == betas[m] == ns.beta[m]
    jac = op.jacobi_krawtchouk(params, 24)
    new, _ = op.qr_step(jac)
    for m in range(1, 21):
        ok &= abs(new.a[m] ** 2 - float(betas[m])) <= 1e-12 * float(betas[m])
        ok &= abs(new.b[m - 1]) <= 1e-12
    # triple agreement for the odd R diagonal: continued fraction, closed
    # product, QR recursion
    for m in range(0, 10):
        cf = op.continued_fraction_r(m, params) * op.monic_ttr(2 * m + 2, params)[1]
        prod = op.r_odd_product(m, params)
        ok &= cf == prod == r2[2 * m + 1]
        ok &= abs(float(cf) - float(r2[2 * m + 1])) <= 1e-12 * abs(float(cf))
    _report("QR sweep == polynomial recurrence (exact; float 1e-12; triple r)", ok)


def test_a4_measure_exactness_and_determinants():
    ok = True
    for n in range(1, 5):
        for k in range(1, 5):
            params = EnsembleParams(n, k)
            table = enumerate_measure(params)  # raises unless the sum is exactly 1
            ok &= all(
                measure_explicit(config_for(lam, params), params) == p for lam, p in table
            )
    worst = 0.0
    for n in range(1, 4):
        for k in range(1, 4):
            params = EnsembleParams(n, k)
            for lam, mu in enumerate_measure(params):
                det = float(np.linalg.det(kernel.correlation_matrix(config_for(lam, params), params)))
                worst = max(worst, abs(det - float(mu)))
    ok &= worst <= 1e-10
    _report("measure: product==dimension forms, sum 1, determinants 1e-10",
            ok, f"worst |det-mu| = {worst:.2e}")


def test_a5_sampler_law_and_bijection():
    worst_tv = 0.0
    for n in range(1, 4):
        for k in range(1, 4):
            params = EnsembleParams(n, k)
            shapes = sample_shapes_array(params, 100_000, stream(2024))
            counts: dict = {}
            for row in shapes:
                lam = normalize_shape(tuple(int(v) for v in row))
                counts[lam] = counts.get(lam, 0) + 1
            tv = 0.5 * sum(
                abs(counts.get(lam, 0) / 100_000 - float(p))
                for lam, p in enumerate_measure(params)
            )
            worst_tv = max(worst_tv, tv)
    ok = worst_tv <= 0.02
    boxes = [
        (n, k)
        for n in range(1, 9)
        for k in range(1, 9)
        if 2 * n * k <= 16
    ]
    for n, k in boxes:
        report = validate_bijection(EnsembleParams(n, k))  # raises on any failure
        ok &= report.total == 4 ** (n * k)
    _report("sampler law (TV <= 0.02 at 1e5) and exhaustive bijection (2nk <= 16)",
            ok, f"worst TV = {worst_tv:.4f}, {len(boxes)} boxes")


def test_a6_kernel_projection():
    km = kernel.kernel_matrix(EnsembleParams(8, 8))
    resid = km.idempotence_residual()
    tr = abs(km.trace() - 8)
    _report("kernel projection at n=k=8 (1e-8)", resid < 1e-8 and tr < 1e-8,
            f"|K^2-K| = {resid:.2e}, |tr-n| = {tr:.2e}")


def test_a7_asymptotic_accuracy():
    t0 = time.perf_counter()
    pairs = [(0.5, 0.45), (0.4, 0.3), (0.6, 0.35), (0.5, 0.3)]
    ok = True
    worst_k, worst_g = 0.0, 0.0
    for g, mu in pairs:
        for kind, thresh in (("krawtchouk", 0.05), ("symplectic", 0.08)):
            errs = {}
            for K in (200, 1600):
                params = EnsembleParams(K // 4, K // 4)
                m = round(g * K)
                j = round((0.5 - mu) * K)
                if kind == "symplectic" and m % 2:
                    m += 1
                rel, osc = asy.relative_error_vs_exact(j, m, params, kind)
                if kind == "krawtchouk" and osc <= 0.1:
                    j += 1  # step off the sine zero
                    rel, osc = asy.relative_error_vs_exact(j, m, params, kind)
                errs[K] = rel
            ok &= errs[1600] < errs[200]
            ok &= errs[1600] < thresh
            if kind == "krawtchouk":
                worst_k = max(worst_k, errs[1600])
            else:
                worst_g = max(worst_g, errs[1600])
    dt = time.perf_counter() - t0
    _report("bulk asymptotics: error shrinks 200->1600, below 0.05/0.08",
            ok and dt < 120, f"worst at 1600: {worst_k:.4f}/{worst_g:.4f}, {dt:.1f}s")


def test_a9_limit_density_identity():
    worst = 0.0
    for H in (0.1, 0.25, 0.4):
        edge = asy.bulk_edge(H)
        for x in np.linspace(-edge, edge, 1002)[1:-1]:
            rho = asy.limit_density(float(x), H)
            worst = max(
                worst,
                abs(math.cos(math.pi * rho) - (1 - 4 * H) / math.sqrt(1 - 4 * x * x)),
            )
    _report("limit density trigonometric identity (1e-12, 10^3 points, 3 H's)",
            worst <= 1e-12, f"worst = {worst:.2e}")


def _cd_sine_sup(params: EnsembleParams, anchor: int, window: int = 20) -> float:
    ctx = kernel._context(params)
    half = params.K // 2
    denom = ctx.pair_value(anchor + half, anchor + half)
    rho = asy.limit_density(anchor / params.K, float(params.H))
    sup = 0.0
    for j in range(anchor - window, anchor + window + 1):
        cd = ctx.pair_value(anchor + half, j + half) / denom
        sup = max(sup, abs(cd - asy.sine_kernel(j - anchor, rho)))
    return sup


def test_a8_figure_pipeline_at_paper_scale():
    t0 = time.perf_counter()
    params = EnsembleParams(50, 100)
    anchor, window = 75, 20
    # (b) and (c): exact kernel against the sine limit, both box sizes
    sup_large = _cd_sine_sup(params, anchor, window)
    sup_small = _cd_sine_sup(EnsembleParams(25, 50), 38, window)
    ok_b = sup_large <= 0.05
    ok_c = sup_small > sup_large
    # (a) the replicated sampling run at full scale
    batch = harness.run_sampling(params, 10_000, 500, seed=1)
    table = harness.compare_curves(batch, anchor, range(anchor - window, anchor + window + 1))
    lo = np.asarray(table.columns["whisker_lo"], dtype=float)
    hi = np.asarray(table.columns["whisker_hi"], dtype=float)
    cd = np.asarray(table.columns["cd_ratio"], dtype=float)
    frac_inside = float(np.mean((cd >= lo - 1e-12) & (cd <= hi + 1e-12)))
    ok_a = frac_inside >= 0.90
    dt = time.perf_counter() - t0
    _report(
        "figure pipeline at paper scale (band >= 90%, CD-sine <= 0.05, monotone)",
        ok_a and ok_b and ok_c,
        f"inside = {frac_inside:.3f}, sup50x100 = {sup_large:.4f}, "
        f"sup25x50 = {sup_small:.4f}, wall = {dt / 60:.1f} min",
    )
