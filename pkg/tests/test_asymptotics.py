import cmath
import math

import numpy as np
import pytest

from spyoung import asymptotics as asy
from spyoung.errors import DomainError, RegionError
from spyoung.params import EnsembleParams


def test_saddle_points_at_center():
    d = asy.saddle_points(0.5, 0.5)
    assert d.oscillatory
    assert d.t_plus == pytest.approx(0.5 + 0.5j, abs=1e-14)
    assert d.t_minus == pytest.approx(0.5 - 0.5j, abs=1e-14)
    assert abs(asy.f_prime(d.t_plus, 0.5, 0.5)) < 1e-12


def test_saddles_on_circle():
    # for fixed mu the saddles lie on (x - 1/2)^2 + y^2 = (1 - mu)/(4 mu)
    mu = 0.4
    for g in (0.3, 0.45, 0.6):
        d = asy.saddle_points(mu, g)
        rad = (d.t_plus.real - 0.5) ** 2 + d.t_plus.imag**2
        assert rad == pytest.approx((1 - mu) / (4 * mu), rel=1e-12)


def test_root_classification_boundary():
    mu = 0.3
    g_edge = 0.5 - math.sqrt(0.25 - (mu - 0.5) ** 2)  # g(1-g) = (mu-1/2)^2
    inside = asy.saddle_points(mu, g_edge + 0.01)
    outside = asy.saddle_points(mu, g_edge - 0.01)
    assert inside.oscillatory and not outside.oscillatory
    assert abs(outside.t_plus.imag) < 1e-14
    boundary = asy.saddle_points(mu, g_edge)
    assert abs(boundary.t_plus - boundary.t_minus) < 1e-6  # double root


def test_saddle_residuals_on_grid():
    for mu in np.linspace(0.1, 0.9, 9):
        for g in np.linspace(0.1, 0.9, 9):
            if asy.oscillatory_gap(mu, g) <= 1e-3:
                continue
            d = asy.phase_data(mu, g)
            assert abs(asy.f_prime(d.t_plus, mu, g)) < 1e-12
            assert abs(asy.f_prime(d.t_minus, mu, g)) < 1e-12


def test_phase_closed_forms_match_direct_evaluation():
    for mu in np.linspace(0.08, 0.92, 15):
        for g in np.linspace(0.08, 0.92, 15):
            if asy.oscillatory_gap(mu, g) <= 2e-3:
                continue
            d = asy.phase_data(mu, g)
            fv = asy.f_value(d.t_plus, mu, g)
            assert abs(fv.real - d.re_f) < 1e-12
            assert abs(fv.imag - d.im_f_plus) < 1e-12
            # conjugate symmetry
            assert asy.f_value(d.t_minus, mu, g).imag == pytest.approx(
                -d.im_f_plus, abs=1e-12
            )
            assert abs(d.zeta1 - (d.gamma - d.chi)) < 1e-12
            assert abs(d.zeta2 - (d.chi - d.tau)) < 1e-12


def test_center_angles():
    d = asy.phase_data(0.5, 0.5)
    assert d.chi == pytest.approx(math.pi / 4, abs=1e-14)
    assert d.theta_sdp == pytest.approx(math.pi / 2, abs=1e-12)


def test_zeta2_step_across_mu_half():
    above = asy.phase_data(0.55, 0.5).zeta2
    below = asy.phase_data(0.45, 0.5).zeta2
    # the +pi correction fires for mu < 1/2 only
    assert 0 < above < math.pi / 2
    assert math.pi / 2 < below < math.pi


def test_theta_in_range_and_continuous():
    for mu in (0.3, 0.5, 0.7):
        thetas = [
            asy.phase_data(mu, g).theta_sdp
            for g in np.linspace(0.35, 0.65, 61)
            if asy.oscillatory_gap(mu, g) > 2e-3
        ]
        assert all(0 < t < math.pi for t in thetas)
        assert max(abs(a - b) for a, b in zip(thetas, thetas[1:])) < 0.05


def test_piecewise_arg_fpp_matches_principal_mod_2pi():
    for mu in np.linspace(0.1, 0.9, 12):
        for g in np.linspace(0.1, 0.9, 12):
            if asy.oscillatory_gap(mu, g) <= 5e-3:
                continue
            d = asy.phase_data(mu, g)
            try:
                pw = asy.arg_fpp_piecewise(mu, g)
            except DomainError:
                continue
            diff = (pw - d.arg_fpp) / (2 * math.pi)
            assert abs(diff - round(diff)) < 1e-9


def test_region_guard():
    with pytest.raises(RegionError):
        asy.phase_data(0.02, 0.9)
    with pytest.raises(DomainError):
        asy.saddle_points(0.0, 0.5)


def test_krawtchouk_asymptotic_accuracy_and_signs():
    params = EnsembleParams(50, 50)  # K = 200
    m = params.K // 2
    worst = 0.0
    sign_errors = 0
    for j in range(5, 40):
        rel, osc = asy.relative_error_vs_exact(j, m, params, "krawtchouk")
        if osc > 0.1:
            worst = max(worst, rel)
            if rel > 1:
                sign_errors += 1
    assert worst < 0.1
    assert sign_errors == 0


def test_krawtchouk_error_decreases_with_K():
    errs = []
    for K in (200, 400):
        params = EnsembleParams(K // 4, K // 4)
        rel, osc = asy.relative_error_vs_exact(
            round(0.05 * K), round(0.5 * K), params, "krawtchouk"
        )
        assert osc > 0.1
        errs.append(rel)
    assert errs[1] < errs[0]


def test_sign_changes_track_exact_polynomial():
    from spyoung.orthopoly import krawtchouk_value_scaled

    params = EnsembleParams(50, 50)
    m = 90
    signs_exact, signs_asym = [], []
    for j in range(10, 30):
        se, _ = krawtchouk_value_scaled(m, j, params)
        sa, _ = asy.krawtchouk_asymptotic_log(j, m, params)
        signs_exact.append(se)
        signs_asym.append(sa)
    assert signs_exact == signs_asym
    assert len({tuple(signs_exact)}) == 1 or -1.0 in signs_exact  # oscillates


def test_symplectic_asymptotic_accuracy():
    params = EnsembleParams(50, 50)  # K = 200, H = 1/4
    m = 2 * params.n
    i = params.K // 8
    rel, _ = asy.relative_error_vs_exact(i, m, params, "symplectic")
    assert rel < 0.15
    rel1600 = asy.relative_error_vs_exact(
        8 * i, m * 8, EnsembleParams(400, 400), "symplectic"
    )[0]
    assert rel1600 < rel


def test_symplectic_parity_in_i():
    params = EnsembleParams(50, 50)
    sp, lp = asy.symplectic_asymptotic_log(20, 100, params)
    sm, lm = asy.symplectic_asymptotic_log(-20, 100, params)
    assert abs(lp - lm) < 1e-9
    assert sp == sm


def test_symplectic_domain():
    params = EnsembleParams(50, 50)
    with pytest.raises(DomainError):
        asy.symplectic_asymptotic(0, 100, params)
    with pytest.raises(DomainError):
        asy.symplectic_asymptotic(5, 99, params)


def test_limit_density_values_and_support():
    assert asy.limit_density(0.0, 0.25) == pytest.approx(0.5, abs=1e-15)
    assert asy.limit_density(0.0, 0.25) == 0.5
    edge = asy.bulk_edge(0.1)
    assert edge == pytest.approx(math.sqrt(8 * 0.1 * (1 - 2 * 0.1)) / 2, abs=1e-15)
    assert asy.limit_density(edge + 1e-6, 0.1) == 0.0
    assert asy.limit_density(edge - 1e-6, 0.1) > 0.0
    assert not asy.in_bulk_support(edge + 1e-6, 0.1)
    assert asy.limit_density(0.49, 0.4) == 0.0  # outside the H = 0.4 bulk
    with pytest.raises(DomainError):
        asy.limit_density(0.0, 0.6)


def test_limit_density_trig_identity():
    for H in (0.1, 0.25, 0.4):
        edge = asy.bulk_edge(H)
        for x in np.linspace(-edge * 0.999, edge * 0.999, 101):
            rho = asy.limit_density(float(x), H)
            assert abs(
                math.cos(math.pi * rho) - (1 - 4 * H) / math.sqrt(1 - 4 * x * x)
            ) < 1e-12


def test_sine_kernel_values():
    assert asy.sine_kernel(0, 0.37) == 1.0
    assert asy.sine_kernel(1, 0.5) == pytest.approx(2 / math.pi, abs=1e-15)
    assert asy.sine_kernel(2, 0.5) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        asy.sine_kernel(1, 1.5)


def test_phase_increment_beta():
    assert asy.phase_increment_beta(0.0, 0.25) == pytest.approx(math.pi, abs=1e-15)
    with pytest.raises(RegionError):
        asy.phase_increment_beta(0.6, 0.25)
    # degenerate 1 - 4H = 0 line: gradient equals pi rho = pi/2 mod pi
    val = asy.bulk_phase_gradient(0.2, 0.25)
    assert (val - math.pi / 2) % math.pi == pytest.approx(0.0, abs=1e-12)


def test_phase_gradient_congruent_to_pi_rho():
    for H in (0.1, 0.2, 0.25, 0.35, 0.4):
        edge = asy.bulk_edge(H)
        for x in np.linspace(-0.95 * edge, 0.95 * edge, 20):
            rho = asy.limit_density(float(x), H)
            grad = asy.bulk_phase_gradient(float(x), H)
            d = (grad - math.pi * rho) / math.pi
            assert abs(d - round(d)) < 1e-10
