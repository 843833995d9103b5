"""Monic Krawtchouk polynomials, their x^2-weight transform, norms and QR step.

Everything on the exact path is rational: polynomials carry ``Fraction``
coefficients, norms and recurrence coefficients are ``Fraction``s, and the
p = 1/2 QR step is carried out on squared quantities so that it stays rational
too.  Floating variants exist where the consumers (kernel evaluation,
asymptotics) need speed.

Conventions.  The lattice is u = i/n, i = -K/2..K/2, with Bernoulli weight
W(u); K_m~ denotes the monic Krawtchouk polynomial of degree m in u and G_m
the monic polynomial orthogonal for the modified weight u^2 W(u).  S_m is the
mixing ratio of the quotient construction (G_m = (K_{m+2}~ + S_m K_m~)/u^2),
L_m the squared norm of K_m~ and Lambda_m the squared norm of G_m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BreakdownError,
    ConsistencyError,
    DegenerateParameterError,
    DomainError,
)
from .params import HALF, EnsembleParams

Coeffs = tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonicPolynomial:
    """Univariate polynomial with exact rational coefficients (ascending)."""

    coeffs: Coeffs
    params: EnsembleParams

    def __post_init__(self) -> None:
        cs = tuple(Fraction(c) for c in self.coeffs)
        if not cs or cs[-1] != 1:
            raise DomainError("leading coefficient must be exactly 1")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative_at(self, x):
        acc = 0
        for j in range(self.degree, 0, -1):
            acc = acc * x + j * self.coeffs[j]
        return acc

    def has_parity(self) -> bool:
        """True when coefficients of the opposite parity all vanish."""
        return all(
            c == 0 for j, c in enumerate(self.coeffs) if (j - self.degree) % 2
        )


def monic_ttr(m: int, params: EnsembleParams) -> tuple[Fraction, Fraction]:
    """(alpha_m~, beta_m~) of u K_m~ = K_{m+1}~ + alpha_m~ K_m~ + beta_m~ K_{m-1}~."""
    K, n, p = params.K, params.n, params.p
    alpha = (p * (K - m) + m * (1 - p) - Fraction(K, 2)) / n
    beta = Fraction(m * (K - m + 1), n * n) * p * (1 - p)
    return alpha, beta


@lru_cache(maxsize=None)
def _krawtchouk_table(params: EnsembleParams, max_m: int) -> tuple[MonicPolynomial, ...]:
    if max_m > params.K:
        raise DomainError(f"degree {max_m} exceeds K = {params.K}")
    polys = [MonicPolynomial((Fraction(1),), params)]
    if max_m >= 1:
        alpha0, _ = monic_ttr(0, params)
        polys.append(MonicPolynomial((-alpha0, Fraction(1)), params))
    for m in range(1, max_m):
        alpha, beta = monic_ttr(m, params)
        prev, cur = polys[m - 1], polys[m]
        cs = [Fraction(0)] * (m + 2)
        for j, c in enumerate(cur.coeffs):
            cs[j + 1] += c
            cs[j] -= alpha * c
        for j, c in enumerate(prev.coeffs):
            cs[j] -= beta * c
        polys.append(MonicPolynomial(tuple(cs), params))
    return tuple(polys)


def monic_krawtchouk(m: int, params: EnsembleParams) -> MonicPolynomial:
    """Monic Krawtchouk polynomial of degree m on the u = i/n lattice."""
    if m < 0:
        raise DomainError("degree must be >= 0")
    return _krawtchouk_table(params, m)[m]


def weight_w(i: int, params: EnsembleParams) -> Fraction:
    """Bernoulli lattice weight W(i/n); sums to 1 over i = -K/2..K/2."""
    K, p = params.K, params.p
    half = K // 2
    if not -half <= i <= half:
        raise DomainError(f"lattice index {i} outside -{half}..{half}")
    return comb(K, half + i) * p ** (half - i) * (1 - p) ** (half + i)


def krawtchouk_orthogonality_check(l: int, m: int, params: EnsembleParams) -> Fraction:
    """Exact lattice sum of K_l~ K_m~ W; equals L_m for l = m, else 0."""
    table = _krawtchouk_table(params, max(l, m))
    pl, pm = table[l], table[m]
    half = params.K // 2
    n = params.n
    return sum(
        pl(Fraction(i, n)) * pm(Fraction(i, n)) * weight_w(i, params)
        for i in range(-half, half + 1)
    )


def norm_l(m: int, params: EnsembleParams) -> Fraction:
    """Squared norm L_m = m!^2 binom(K, m) (p(1-p))^m / n^(2m)."""
    K, n, p = params.K, params.n, params.p
    return (
        Fraction(factorial(m) ** 2 * comb(K, m), n ** (2 * m)) * (p * (1 - p)) ** m
    )


# ---------------------------------------------------------------------------
# values at the origin and the quotient transform
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _origin_data(params: EnsembleParams, max_m: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """(values, derivatives) of K_m~ at u = 0 for m = 0..max_m, by recurrence."""
    vals = [Fraction(1), Fraction(0)]
    ders = [Fraction(0), Fraction(1)]
    for m in range(1, max_m):
        alpha, beta = monic_ttr(m, params)
        vals.append(-alpha * vals[m] - beta * vals[m - 1])
        ders.append(vals[m] - alpha * ders[m] - beta * ders[m - 1])
    return tuple(vals[: max_m + 1]), tuple(ders[: max_m + 1])


def mixing_ratio(m: int, params: EnsembleParams) -> Fraction:
    """S_m: minus the ratio of origin values (even m) or derivatives (odd m)."""
    params.require_symmetric("the parity-split quotient construction")
    vals, ders = _origin_data(params, m + 3)
    if m % 2 == 0:
        num, den = vals[m + 2], vals[m]
    else:
        num, den = ders[m + 2], ders[m]
    if den == 0:
        raise DegenerateParameterError(f"origin data of degree {m} vanished")
    return -num / den


def krawtchouk_zero_ratio(m: int, params: EnsembleParams) -> Fraction:
    """K_{m+2}~(0)/K_m~(0) for even m; asserts the closed form -(K-m)(m+1)/(4n^2)."""
    params.require_symmetric("the origin-value ratio")
    if m % 2 != 0:
        raise DomainError("the origin-value ratio is defined for even m")
    if m + 2 > params.K:
        raise DomainError(f"need m + 2 <= K, got m = {m}, K = {params.K}")
    ratio = -mixing_ratio(m, params)
    closed = -Fraction((params.K - m) * (m + 1), 4 * params.n**2)
    if ratio != closed:
        raise ConsistencyError(
            f"origin-value ratio {ratio} != closed form {closed} at m = {m}"
        )
    return ratio


def _divide_by_x2(coeffs: Sequence[Fraction]) -> Coeffs:
    if len(coeffs) < 3 or coeffs[0] != 0 or coeffs[1] != 0:
        raise ConsistencyError("quotient by u^2 left a nonzero remainder")
    return tuple(coeffs[2:])


@lru_cache(maxsize=None)
def _symplectic_table(params: EnsembleParams, max_m: int) -> tuple[MonicPolynomial, ...]:
    table = _krawtchouk_table(params, max_m + 2)
    out = []
    for m in range(max_m + 1):
        s = mixing_ratio(m, params)
        hi, lo = table[m + 2], table[m]
        cs = list(hi.coeffs)
        for j, c in enumerate(lo.coeffs):
            cs[j] += s * c
        out.append(MonicPolynomial(_divide_by_x2(cs), params))
    return tuple(out)


def christoffel_transform(m: int, params: EnsembleParams) -> MonicPolynomial:
    """Monic G_m, orthogonal for the weight u^2 W(u).

    Built as (K_{m+2}~ + S_m K_m~)/u^2 with the parity-adapted mixing ratio;
    exactness of the division is a built-in self check.
    """
    if m < 0:
        raise DomainError("degree must be >= 0")
    if m + 2 > params.K:
        raise DomainError(f"need m + 2 <= K, got m = {m}, K = {params.K}")
    return _symplectic_table(params, m)[m]


# ---------------------------------------------------------------------------
# norms of the transformed family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormSequence:
    """Norms and monic recurrence data of the transformed family.

    ``Lambda[m]`` is the squared norm of G_m under u^2 W(u), ``L[m]`` the
    squared norm of K_m~ under W, ``S[m]`` the mixing ratio, and
    ``alpha``/``beta`` the monic three-term coefficients of the G family.
    """

    params: EnsembleParams
    L: tuple[Fraction, ...]
    S: tuple[Fraction, ...]
    Lambda: tuple[Fraction, ...]
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]


def second_moment(params: EnsembleParams) -> Fraction:
    """Omega_2 = sum (i/n)^2 W(i/n) = K (K(1-2p)^2 - 4(p-1)p) / (4 n^2)."""
    K, n, p = params.K, params.n, params.p
    return Fraction(K, 4 * n * n) * (K * (1 - 2 * p) ** 2 - 4 * (p - 1) * p)


def norm_sequence(params: EnsembleParams, max_m: int) -> NormSequence:
    """Norms Lambda_m for m = 0..max_m via the coupled recurrences.

    Seeds Lambda_0 = Omega_2, then alternates beta_m = S_m L_m / Lambda_{m-1}
    with Lambda_{m+1} = L_{m+2} + S_m^2 L_m - beta_m^2 Lambda_{m-1} (the p=1/2
    form, where all alpha_m vanish).  Positivity of every Lambda is enforced.
    """
    params.require_symmetric("norm_sequence")
    if max_m + 2 > params.K:
        raise DomainError(f"need max_m + 2 <= K, got {max_m}, K = {params.K}")
    L = tuple(norm_l(m, params) for m in range(max_m + 3))
    S = tuple(mixing_ratio(m, params) for m in range(max_m + 1))
    lam = [second_moment(params)]
    beta = [Fraction(0)]
    for m in range(0, max_m):
        if m == 0:
            lam.append(L[2] + S[0] ** 2 * L[0])
        else:
            b = S[m] * L[m] / lam[m - 1]
            beta.append(b)
            lam.append(L[m + 2] + S[m] ** 2 * L[m] - b**2 * lam[m - 1])
        if lam[-1] <= 0:
            raise DegenerateParameterError(f"Lambda_{m + 1} is not positive")
    if max_m >= 1:
        beta.append(S[max_m] * L[max_m] / lam[max_m - 1])
    alpha = tuple(Fraction(0) for _ in range(max_m + 1))
    return NormSequence(params, L[: max_m + 1], S, tuple(lam), alpha, tuple(beta))


def lambda_by_summation(m: int, params: EnsembleParams) -> Fraction:
    """Validator: Lambda_m as the literal lattice sum of G_m^2 u^2 W(u)."""
    g = christoffel_transform(m, params)
    half = params.K // 2
    n = params.n
    total = Fraction(0)
    for i in range(-half, half + 1):
        u = Fraction(i, n)
        total += g(u) ** 2 * u * u * weight_w(i, params)
    return total


def orthonormalize(g: MonicPolynomial, lam: Fraction) -> Callable[[float], float]:
    """Orthonormal version x -> G_m(x)/sqrt(Lambda_m) as a float evaluator."""
    if lam <= 0:
        raise DomainError("norm must be positive")
    scale = 1.0 / math.sqrt(float(lam))
    cs = [float(c) for c in g.coeffs]

    def evaluate(x: float) -> float:
        acc = cs[-1]
        for c in reversed(cs[:-1]):
            acc = acc * x + c
        return acc * scale

    return evaluate


# ---------------------------------------------------------------------------
# Jacobi matrices and the QR step
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JacobiCoefficients:
    """Tridiagonal recurrence data; ``a[m]`` is the off-diagonal, 1-based.

    ``a[0]`` is a placeholder zero.  ``flavor`` is either
    ``"krawtchouk-orthonormal"`` or ``"symplectic-transformed"``.
    """

    a: tuple[float, ...]
    b: tuple[float, ...]
    flavor: str

    def __post_init__(self) -> None:
        if any(v == 0 for v in self.a[1:]):
            raise BreakdownError("off-diagonal entries must be nonzero")


@dataclass(frozen=True)
class QRState:
    """Givens working data of one QR sweep (R diagonal, superdiagonal, trailing)."""

    rdiag: tuple[float, ...]
    sdiag: tuple[float, ...]
    astar: tuple[float, ...]
    bstar: tuple[float, ...]


def jacobi_krawtchouk(params: EnsembleParams, max_m: int) -> JacobiCoefficients:
    """Orthonormal-Krawtchouk Jacobi coefficients a_m = -sqrt(beta_m~), b_m = alpha_m~."""
    a = [0.0]
    b = []
    for m in range(max_m + 1):
        alpha, beta = monic_ttr(m, params)
        b.append(float(alpha))
        if m >= 1:
            a.append(-math.sqrt(float(beta)))
    return JacobiCoefficients(tuple(a), tuple(b), "krawtchouk-orthonormal")


def qr_step(jac: JacobiCoefficients) -> tuple[JacobiCoefficients, QRState]:
    """One QR sweep J -> RQ on a Jacobi matrix, via Givens rotations.

    Returns the transformed coefficients (valid through index M-1 for the
    off-diagonal and M-2 for the diagonal, M = len(a)-1) and the R factors.
    """
    a, b = jac.a, jac.b
    M = len(a) - 1
    astar = [0.0] * (M + 1)
    bstar = [0.0] * (M + 1)
    r = [0.0] * (M + 1)
    s = [0.0] * (M + 1)
    astar[1] = a[1]
    bstar[0] = b[0]
    r[0] = math.hypot(a[1], b[0])
    if r[0] == 0:
        raise BreakdownError("r_0 = 0 in the QR sweep")
    for k in range(1, M):
        if k >= 2:
            astar[k] = a[k] * bstar[k - 2] / r[k - 2]
        bstar[k] = (bstar[k - 1] * b[k] - astar[k] * a[k]) / r[k - 1]
        r[k] = math.hypot(a[k + 1], bstar[k])
        if r[k] == 0:
            raise BreakdownError(f"r_{k} = 0 in the QR sweep")
        s[k] = (astar[k] * bstar[k - 1] + a[k] * b[k]) / r[k - 1]
    a_hat = [0.0] * M
    for k in range(1, M):
        a_hat[k] = a[k] * r[k] / r[k - 1]
    b_hat = [b[0] + a[1] * s[1] / r[0]] if M >= 2 else [b[0]]
    for k in range(1, M - 1):
        b_hat.append(bstar[k - 1] * bstar[k] / r[k - 1] + a[k + 1] * s[k + 1] / r[k])
    out = JacobiCoefficients(tuple(a_hat), tuple(b_hat), "symplectic-transformed")
    return out, QRState(tuple(r[: M]), tuple(s[: M]), tuple(astar[: M + 1]), tuple(bstar[: M]))


def qr_step_squared_exact(
    params: EnsembleParams, max_m: int
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Exact p = 1/2 QR sweep on squared quantities.

    Returns (a_hat_sq, r_sq): a_hat_sq[m] for m = 1..max_m, r_sq[m] for
    m = 0..max_m.  Rational throughout since only squares enter at p = 1/2.
    """
    params.require_symmetric("the exact QR sweep")
    a2 = [Fraction(0)] + [monic_ttr(m, params)[1] for m in range(1, max_m + 3)]
    bstar2 = [Fraction(0)] * (max_m + 2)
    astar2 = [Fraction(0)] * (max_m + 2)
    r2 = [Fraction(0)] * (max_m + 1)
    astar2[1] = a2[1]
    r2[0] = a2[1]
    for k in range(1, max_m + 1):
        if k >= 2:
            if r2[k - 2] == 0:
                raise BreakdownError(f"r_{k - 2}^2 = 0 in the exact QR sweep")
            astar2[k] = a2[k] * bstar2[k - 2] / r2[k - 2]
        bstar2[k] = astar2[k] * a2[k] / r2[k - 1] if r2[k - 1] != 0 else Fraction(0)
        if r2[k - 1] == 0:
            raise BreakdownError(f"r_{k - 1}^2 = 0 in the exact QR sweep")
        r2[k] = a2[k + 1] + bstar2[k]
    a_hat_sq = [Fraction(0)] * (max_m + 1)
    for k in range(1, max_m + 1):
        a_hat_sq[k] = a2[k] * r2[k] / r2[k - 1]
    return tuple(a_hat_sq), tuple(r2)


def ttr_from_polynomials(
    max_m: int, params: EnsembleParams
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """(alpha_m, beta_m) of x G_m = G_{m+1} + alpha_m G_m + beta_m G_{m-1}.

    Extracted by exact coefficient matching from the transformed polynomials;
    a nonzero residual raises.
    """
    if max_m + 3 > params.K:
        raise DomainError(f"need max_m + 3 <= K, got {max_m}, K = {params.K}")
    table = _symplectic_table(params, max_m + 1)
    alphas: list[Fraction] = []
    betas: list[Fraction] = [Fraction(0)]
    for m in range(max_m + 1):
        gm, gnext = table[m], table[m + 1]
        res = [Fraction(0)] * (m + 2)
        for j, c in enumerate(gm.coeffs):
            res[j + 1] += c
        for j, c in enumerate(gnext.coeffs):
            res[j] -= c
        alpha = res[m]
        for j, c in enumerate(gm.coeffs):
            res[j] -= alpha * c
        alphas.append(alpha)
        if m >= 1:
            gprev = table[m - 1]
            beta = res[m - 1]
            for j, c in enumerate(gprev.coeffs):
                res[j] -= beta * c
            betas.append(beta)
        if any(c != 0 for c in res):
            raise ConsistencyError(f"three-term residual nonzero at m = {m}")
    return tuple(alphas), tuple(betas[: max_m + 1])


# ---------------------------------------------------------------------------
# continued fraction and closed product for the R diagonal (p = 1/2)
# ---------------------------------------------------------------------------


def continued_fraction_r(m: int, params: EnsembleParams) -> Fraction:
    """r_{2m+1}^2 / a_{2m+2}^2 as the m-th convergent of the continued fraction."""
    params.require_symmetric("continued_fraction_r")
    if 2 * m + 2 > params.K:
        raise DomainError("continued fraction ran past the weight support")
    a2 = {j: monic_ttr(j, params)[1] for j in range(1, 2 * m + 3)}

    def A(k: int) -> Fraction:
        return -a2[2 * m + 1 - 2 * (k - 1)] / a2[2 * m + 2 - 2 * (k - 1)]

    def B(k: int) -> Fraction:
        return 1 + a2[2 * m + 1 - 2 * k] / a2[2 * m + 2 - 2 * k]

    r_prev, s_prev = Fraction(1), Fraction(0)  # index -1
    r_cur, s_cur = B(0), Fraction(1)  # index 0
    for k in range(1, m + 1):
        r_cur, r_prev = B(k) * r_cur + A(k) * r_prev, r_cur
        s_cur, s_prev = B(k) * s_cur + A(k) * s_prev, s_cur
        if s_cur == 0:
            raise BreakdownError(f"continued-fraction denominator vanished at k = {k}")
    return r_cur / s_cur


def r_odd_product(m: int, params: EnsembleParams) -> Fraction:
    """r_{2m+1}^2 by the closed product/sum form (p = 1/2)."""
    params.require_symmetric("r_odd_product")
    a2 = {j: monic_ttr(j, params)[1] for j in range(1, 2 * m + 3)}
    top = Fraction(1)
    for j in range(1, m + 2):
        top *= a2[2 * j - 1]
    den = Fraction(0)
    for ell in range(-1, m):
        term = Fraction(1)
        for kk in range(0, ell + 1):
            term *= a2[2 * m - 2 * kk]
        for j in range(1, m - ell):
            term *= a2[2 * j - 1]
        den += term
    return a2[2 * m + 2] + top / den


# ---------------------------------------------------------------------------
# hypergeometric evaluation
# ---------------------------------------------------------------------------


def _f21_terminating(m: int, b_num: Fraction, params: EnsembleParams) -> Fraction:
    """2F1(-m, b; -K; 1/p) as the exact terminating sum, b = -K/2 - n*u."""
    K, p = params.K, params.p
    z = 1 / p
    term = Fraction(1)
    total = Fraction(1)
    for j in range(m):
        term *= Fraction(-(m - j)) * (b_num + j) / Fraction(-K + j) * z / (j + 1)
        total += term
    return total


def hypergeometric_eval(m: int, u, params: EnsembleParams):
    """G_m(u) through the terminating hypergeometric representation (even m).

    Exact for rational ``u``; the origin is delegated to the polynomial route,
    where the double zero of the bracket is cancelled algebraically.
    """
    if m % 2 != 0:
        raise DomainError("the hypergeometric route is implemented for even m")
    if m + 2 > params.K:
        raise DomainError(f"need m + 2 <= K, got m = {m}, K = {params.K}")
    K, n, p = params.K, params.n, params.p
    uq = Fraction(u)
    if uq == 0:
        return christoffel_transform(m, params)(Fraction(0))
    b = -Fraction(K, 2) - n * uq
    f_hi = _f21_terminating(m + 2, b, params)
    f_lo = _f21_terminating(m, b, params)
    f_hi0 = _f21_terminating(m + 2, -Fraction(K, 2), params)
    f_lo0 = _f21_terminating(m, -Fraction(K, 2), params)
    if f_lo0 == 0:
        raise DegenerateParameterError("origin hypergeometric value vanished")
    c = (-1) ** m * p ** (m + 2) * Fraction(factorial(m + 2) * comb(K, m + 2), n ** (m + 2))
    return c / (uq * uq) * (f_hi - f_hi0 / f_lo0 * f_lo)


# ---------------------------------------------------------------------------
# scaled float evaluation (for asymptotics oracles at large K)
# ---------------------------------------------------------------------------


def krawtchouk_value_scaled(m: int, j: int, params: EnsembleParams) -> tuple[float, float]:
    """(sign, log|K_m~(j/n)|) by the scaled three-term recurrence.

    Stable for K in the thousands; rescales whenever values leave
    [1e-150, 1e150] and accumulates the log of the scale factor.
    """
    if m > params.K:
        raise DomainError(f"degree {m} exceeds K = {params.K}")
    u = j / params.n
    prev, cur = 0.0, 1.0  # K_{-1}, K_0
    log_scale = 0.0
    for t in range(m):
        alpha, beta = monic_ttr(t, params)
        prev, cur = cur, (u - float(alpha)) * cur - float(beta) * prev
        mag = max(abs(prev), abs(cur))
        if mag > 1e150 or (0 < mag < 1e-150):
            prev /= mag
            cur /= mag
            log_scale += math.log(mag)
    if cur == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, cur), math.log(abs(cur)) + log_scale


def symplectic_value_scaled(m: int, i: int, params: EnsembleParams) -> tuple[float, float]:
    """(sign, log|G_m(i/n)|) for even m, composed from the scaled evaluations."""
    if i == 0:
        raise DomainError("the quotient form needs i != 0")
    if m % 2 != 0:
        raise DomainError("even degrees only")
    s_hi, l_hi = krawtchouk_value_scaled(m + 2, i, params)
    s_lo, l_lo = krawtchouk_value_scaled(m, i, params)
    s_mix = (params.K - m) * (m + 1) / (4.0 * params.n**2)  # S_m > 0
    l_mix = math.log(s_mix) + l_lo
    hi = max(l_hi, l_mix)
    val = s_hi * math.exp(l_hi - hi) + s_lo * math.exp(l_mix - hi)
    if val == 0.0:
        return 0.0, -math.inf
    log_abs = math.log(abs(val)) + hi + 2.0 * math.log(params.n / abs(i))
    return math.copysign(1.0, val), log_abs
