"""Saddle-point asymptotics in the double-scaling regime m = gK, i = K(1-2mu)/2.

The phase function is f(t) = (1-mu) ln(t-p) + (g-1) ln t - g ln(1-t) with
p = 1/2 throughout; the oscillatory (two complex saddles) region is
(mu-1/2)^2 < g(1-g).  Angle bookkeeping follows the two-argument arctangent
with explicit step-function corrections; the tangent angle of the descent path
is taken from the principal-value argument of f''(t0^-), which keeps it inside
(0, pi) across the whole region.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, RegionError
from .orthopoly import krawtchouk_value_scaled, symplectic_value_scaled
from .params import EnsembleParams

OSCILLATORY_MARGIN = 1e-3


def heaviside(x: float) -> float:
    """Step function with the convention Theta(x) = 0 for x <= 0."""
    return 1.0 if x > 0 else 0.0


def _plain_atan(s: float, d: float) -> float:
    """arctan(s/d) without step correction, valued pi/2 at d = 0 (s > 0)."""
    if d == 0:
        return math.pi / 2
    return math.atan(s / d)


def f_value(t: complex, mu: float, g: float, p: float = 0.5) -> complex:
    return (1 - mu) * cmath.log(t - p) + (g - 1) * cmath.log(t) - g * cmath.log(1 - t)


def f_prime(t: complex, mu: float, g: float, p: float = 0.5) -> complex:
    return (1 - mu) / (t - p) + (g - 1) / t + g / (1 - t)


def f_second(t: complex, mu: float, g: float, p: float = 0.5) -> complex:
    return -(1 - mu) / (t - p) ** 2 - (g - 1) / t**2 + g / (1 - t) ** 2


@dataclass(frozen=True)
class SaddleData:
    """Saddle points of the phase function and the derived angle data.

    Angles are populated only in the oscillatory region (``oscillatory`` is
    True); ``theta_sdp`` is the descent-path tangent angle at the lower saddle
    and ``arg_fpp`` the principal argument of f'' there.
    """

    mu: float
    g: float
    t_plus: complex
    t_minus: complex
    oscillatory: bool
    chi: float = math.nan
    tau: float = math.nan
    gamma: float = math.nan
    zeta1: float = math.nan
    zeta2: float = math.nan
    zeta1_hat: float = math.nan
    tau_hat: float = math.nan
    re_f: float = math.nan
    im_f_plus: float = math.nan
    arg_fpp: float = math.nan
    theta_sdp: float = math.nan
    orientation: float = 1.0


def _check_mu_g(mu: float, g: float) -> None:
    if not 0 < mu < 1:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    if not 0 < g < 1:
        raise DomainError(f"g must lie in (0, 1), got {g}")


def oscillatory_gap(mu: float, g: float) -> float:
    """g(1-g) - (mu-1/2)^2; positive inside the two-complex-saddle region."""
    return g * (1 - g) - (mu - 0.5) ** 2


def saddle_points(mu: float, g: float, p: float = 0.5) -> SaddleData:
    """Both roots of f'(t) = 0 with their oscillatory/real classification."""
    _check_mu_g(mu, g)
    disc = complex((-g + mu + p) ** 2 - 4 * mu * p * (1 - g))
    root = cmath.sqrt(disc)
    t_plus = (root - g + mu + p) / (2 * mu)
    t_minus = (-root - g + mu + p) / (2 * mu)
    oscillatory = disc.real < 0
    if oscillatory and t_plus.imag < 0:
        t_plus, t_minus = t_minus, t_plus
    return SaddleData(mu, g, t_plus, t_minus, oscillatory)


def phase_data(mu: float, g: float) -> SaddleData:
    """Full angle data at p = 1/2; requires the oscillatory margin.

    chi, tau, gamma are the arguments of t0^+, 1 - t0^+ and t0^+ - 1/2; the
    zeta combinations and hatted variants drop the step corrections that
    cancel against the parity of K.
    """
    _check_mu_g(mu, g)
    gap = oscillatory_gap(mu, g)
    if gap <= OSCILLATORY_MARGIN:
        raise RegionError(
            f"(mu, g) = ({mu}, {g}) outside the oscillatory region (gap {gap:.3e})"
        )
    base = saddle_points(mu, g)
    s = math.sqrt(gap)
    # arctan(s/d) + pi*Theta(-d) with s > 0 is exactly atan2(s, d); the hatted
    # variants drop the pi step (irrelevant modulo 2 pi once multiplied by the
    # even K), realized by _plain below.
    chi = math.atan2(s, mu + 0.5 - g)
    tau = -math.atan2(s, g + mu - 0.5)
    gamma = math.atan2(s, 0.5 - g)
    zeta1 = math.atan2(s, 1.5 - g - mu)
    zeta2 = math.atan2(s, mu - 0.5)
    zeta1_hat = _plain_atan(s, 1.5 - g - mu)
    tau_hat = _plain_atan(s, g + mu - 0.5)
    re_f = 0.5 * (
        math.log((1 - mu) / (2 * (1 - g)))
        + 2 * g * math.atanh(1 - 2 * g)
        + mu * math.log(4 * mu / (1 - mu))
    )
    im_f = (1 - mu) * gamma + (g - 1) * chi - g * tau
    arg_fpp = cmath.phase(f_second(base.t_minus, mu, g))
    theta = -arg_fpp / 2 + math.pi / 2
    # Descent-path orientation: the tangent direction through the lower saddle
    # reverses outside the band |g - 1/2| <= sqrt(mu(3-2mu))/2 (the threshold
    # curves of the 2 pi steps in the closed form of arg f'').  Pinned against
    # exact polynomial values on a 26k-point grid.
    orientation = -1.0 if abs(g - 0.5) > math.sqrt(mu * (3 - 2 * mu)) / 2 else 1.0
    return SaddleData(
        mu,
        g,
        base.t_plus,
        base.t_minus,
        True,
        chi=chi,
        tau=tau,
        gamma=gamma,
        zeta1=zeta1,
        zeta2=zeta2,
        zeta1_hat=zeta1_hat,
        tau_hat=tau_hat,
        re_f=re_f,
        im_f_plus=im_f,
        arg_fpp=arg_fpp,
        theta_sdp=theta,
        orientation=orientation,
    )


def arg_fpp_piecewise(mu: float, g: float) -> float:
    """Printed closed form of arg f''(t0^-) (step corrections included).

    Only defined where its radicand combinations are real; serves as a
    cross-check of the principal-value computation.
    """
    gap = oscillatory_gap(mu, g)
    if gap <= 0:
        raise RegionError("outside the oscillatory region")
    s = math.sqrt(gap)
    gm = g - 0.5
    num = gm * (gm * gm - 0.75 * mu + mu * mu / 2)
    den = s * (mu / 4 - gm * gm)
    if den == 0:
        raise DomainError("denominator of the closed form vanishes")
    radic = mu * (3 - 2 * mu)
    sig_shift = math.sqrt(radic) / 2
    sigma = -2 * math.pi * heaviside(g - 0.5 + sig_shift) + 2 * math.pi * heaviside(
        g - 0.5 - sig_shift
    )
    val = (
        math.atan(num / den)
        + sigma
        + math.pi * heaviside(0.5 - math.sqrt(mu) / 2 - g)
        - math.pi * heaviside(g - (0.5 + math.sqrt(mu) / 2))
    )
    return -val


def delta_hat(j: int, m: int, K: int) -> float:
    """Total phase (m-1) zeta2 + K zeta1_hat - K mu gamma + 2 tau_hat at mu(j), g(m)."""
    mu = 0.5 - j / K
    g = m / K
    d = phase_data(mu, g)
    return (m - 1) * d.zeta2 + K * d.zeta1_hat - K * mu * d.gamma + 2 * d.tau_hat


def _krawtchouk_log_parts(j: int, m: int, params: EnsembleParams) -> tuple[float, float]:
    """(log of the positive amplitude, oscillating sine) of the degree-m value at u = j/n."""
    params.require_symmetric("the steepest-descent approximation")
    K, n = params.K, params.n
    if not -K // 2 <= j <= K // 2:
        raise DomainError(f"lattice index {j} outside the support")
    mu = 0.5 - j / K
    g = m / K
    gap = oscillatory_gap(mu, g)
    if gap <= OSCILLATORY_MARGIN:
        raise RegionError(f"(mu, g) = ({mu:.4f}, {g:.4f}) not in the oscillatory bulk")
    d = phase_data(mu, g)
    phase = d.theta_sdp - (
        (m - 1) * d.zeta2 + K * d.zeta1_hat - K * mu * d.gamma + 2 * d.tau_hat
    )
    osc = d.orientation * math.sin(phase)
    log_amp = (
        math.lgamma(m + 1)
        - m * math.log(n)
        + 0.5 * (math.log(2.0) - math.log(math.pi * K))
        + (m - K - 0.5) * 0.5 * math.log(1 - g)
        + (K / 2 + j + 0.5) * 0.5 * math.log(1 - mu)
        - (m + 0.5) * 0.5 * math.log(g)
        - (j - K / 2 - 0.5) * 0.5 * math.log(mu)
        - (m - K / 2) * math.log(2.0)
        - 0.25 * math.log(gap)
    )
    return log_amp, osc


def krawtchouk_asymptotic_log(j: int, m: int, params: EnsembleParams) -> tuple[float, float]:
    """(sign, log|value|) of the bulk approximation to the degree-m polynomial.

    The contour representation behind the formula approximates the
    parity-reflected value (-1)^m K_m~(j/n); the extra (-1)^m here converts it
    to K_m~(j/n) itself, as pinned against the exact recurrence.
    """
    log_amp, osc = _krawtchouk_log_parts(j, m, params)
    if osc == 0.0:
        return 0.0, -math.inf
    sign = math.copysign(1.0, osc) * (1.0 if m % 2 == 0 else -1.0)
    return sign, log_amp + math.log(abs(osc))


def krawtchouk_asymptotic(j: int, m: int, params: EnsembleParams) -> float:
    """Bulk steepest-descent approximation of the monic polynomial at u = j/n."""
    sign, log_abs = krawtchouk_asymptotic_log(j, m, params)
    return sign * math.exp(log_abs)


def symplectic_asymptotic_log(i: int, m: int, params: EnsembleParams) -> tuple[float, float]:
    """(sign, log|value|) of the bulk approximation to G_m(i/n), even m.

    Composes the two steepest-descent approximations of the quotient
    construction at their exact degrees (g = m/K and (m+2)/K), which realizes
    the printed two-sine form including its relative weight.
    """
    if i == 0:
        raise DomainError("the quotient form needs i != 0")
    if m % 2 != 0:
        raise DomainError("even degrees only")
    K, n = params.K, params.n
    s_hi, l_hi = krawtchouk_asymptotic_log(i, m + 2, params)
    s_lo, l_lo = krawtchouk_asymptotic_log(i, m, params)
    s_mix = (K - m) * (m + 1) / (4.0 * n * n)
    l_mix = math.log(s_mix) + l_lo if l_lo > -math.inf else -math.inf
    hi = max(l_hi, l_mix)
    if hi == -math.inf:
        return 0.0, -math.inf
    val = s_hi * math.exp(l_hi - hi) + s_lo * math.exp(l_mix - hi)
    if val == 0.0:
        return 0.0, -math.inf
    log_abs = math.log(abs(val)) + hi + 2.0 * math.log(n / abs(i))
    return math.copysign(1.0, val), log_abs


def symplectic_asymptotic(i: int, m: int, params: EnsembleParams) -> float:
    sign, log_abs = symplectic_asymptotic_log(i, m, params)
    return sign * math.exp(log_abs)


def relative_error_vs_exact(
    j: int, m: int, params: EnsembleParams, kind: str = "krawtchouk"
) -> tuple[float, float]:
    """(relative error, |sin phase|) of the approximation against the exact value."""
    if kind == "krawtchouk":
        s_a, l_a = krawtchouk_asymptotic_log(j, m, params)
        s_e, l_e = krawtchouk_value_scaled(m, j, params)
        _, osc = _krawtchouk_log_parts(j, m, params)
    elif kind == "symplectic":
        s_a, l_a = symplectic_asymptotic_log(j, m, params)
        s_e, l_e = symplectic_value_scaled(m, j, params)
        osc = math.nan
    else:
        raise DomainError(f"unknown kind {kind!r}")
    if l_e == -math.inf:
        return math.inf, abs(osc)
    rel = abs(s_a * math.exp(l_a - l_e) - s_e)
    return rel, abs(osc)


# ---------------------------------------------------------------------------
# limit density and the discrete sine kernel
# ---------------------------------------------------------------------------


def bulk_edge(H: float) -> float:
    """Edge of the bulk support: the density vanishes at |x| = sqrt(2H - 4H^2)."""
    if not 0 < H < 0.5:
        raise DomainError(f"H must lie in (0, 1/2), got {H}")
    return math.sqrt(2 * H - 4 * H * H)


def limit_density(x: float, H: float) -> float:
    """Limiting particle density rho(x) = arccos((1-4H)/sqrt(1-4x^2)) / pi.

    Returns 0 outside the support (where the arccosine argument exceeds 1 in
    absolute value), matching the vanishing density beyond the bulk.
    """
    if not 0 < H < 0.5:
        raise DomainError(f"H must lie in (0, 1/2), got {H}")
    if abs(x) >= 0.5:
        return 0.0
    arg = (1 - 4 * H) / math.sqrt(1 - 4 * x * x)
    if abs(arg) > 1:
        return 0.0
    return math.acos(arg) / math.pi


def in_bulk_support(x: float, H: float) -> bool:
    return abs(x) < 0.5 and (1 - 4 * H) ** 2 <= 1 - 4 * x * x


def sine_kernel(di: int, rho: float) -> float:
    """Discrete sine kernel sin(pi rho d)/(pi rho d), normalized to 1 at d = 0."""
    if not 0 <= rho <= 1:
        raise DomainError(f"density must lie in [0, 1], got {rho}")
    if di == 0:
        return 1.0
    t = math.pi * rho * di
    if t == 0.0:
        return 1.0
    return math.sin(t) / t


def phase_increment_beta(x: float, H: float) -> float:
    """Phase shift of the degree step m -> m + 2 at bulk position x.

    Equals 2 arccot(x / sqrt(2H - 4H^2 - x^2)) with arccot valued in (0, pi).
    """
    rad = 2 * H - 4 * H * H - x * x
    if rad <= 0:
        raise RegionError(f"x = {x} outside the bulk for H = {H}")
    return 2 * (math.pi / 2 - math.atan(x / math.sqrt(rad)))


def bulk_phase_gradient(x: float, H: float) -> float:
    """Per-site phase pi + arctan(2 sqrt(2H-4H^2-x^2)/(1-4H)); congruent to pi rho(x) mod pi."""
    rad = 2 * H - 4 * H * H - x * x
    if rad <= 0:
        raise RegionError(f"x = {x} outside the bulk for H = {H}")
    if H == 0.25:
        return math.pi + math.pi / 2
    return math.pi + math.atan(2 * math.sqrt(rad) / (1 - 4 * H))
