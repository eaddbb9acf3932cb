"""Modular parameter, large-L entropy and the asymptotic Toeplitz determinant.

The branch points are joined by two cuts ``J1 = [lambdaA, lambdaB]`` and
``J2 = [lambdaC, lambdaD]``, and

    w(z) = sqrt((z - lambdaA)(z - lambdaB)(z - lambdaC)(z - lambdaD)),   w ~ z^2,

is single valued off the cuts.  The periods

    c   = 2 int_{lambdaA}^{lambdaB} dz / w      (left bank of J1)
    tau = (2/c) int_{lambdaB}^{lambdaC} dz / w

give a purely imaginary ``tau = i tau0``; everything else is a function of
``tau0`` and ``sigma``.  Entropy routes implemented here:

* ``entropy_series``   ``sum_{m in Z} (1 + lambda_m) ln(2 / (1 + lambda_m))``
  with ``lambda_m = tanh((m + (1 - sigma)/2) pi tau0)``
* ``entropy_integral`` ``(pi/2) int_0^inf log_theta_ratio(x) dx / sinh^2(pi x)``
* ``entropy_closed``   the elliptic-integral closed forms in terms of ``k``
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit

from .errors import DomainError, ExcludedPointError, OnCutError, PurityError, QuadratureError, SmallTauError
from .model import Case, ModelParams, Regime
from .quadrature import adaptive_chebyshev, adaptive_gauss_legendre
from .results import EntropyResult, LogValue, Method
from .special import TAU0_MIN, ThetaParams, elliptic_K, log_theta3, log_theta3_imag_cumulants, log_theta_ratio

QUAD_TOL = 1e-10
X_CUT = 1e-3


def segment_root(z, p: complex, q: complex, dp=None, dq=None):
    """``sqrt((z - p)(z - q))`` with its cut on the segment ``[p, q]`` and ``~ z`` at infinity.

    ``dp``/``dq`` may carry ``z - p``/``z - q`` when the caller can form them
    without cancellation.
    """
    z = np.asarray(z, dtype=complex)
    dp = z - p if dp is None else dp
    dq = z - q if dq is None else dq
    s = np.sqrt(dp * dq)
    # principal sqrt(1 - r^2/(z-m)^2) has Re >= 0, so s/(z - m) must too
    flip = (s * np.conj(z - 0.5 * (p + q))).real < 0
    return np.where(flip, -s, s)


def _distance_to_segment(z, p: complex, q: complex):
    d = q - p
    t = np.clip(((z - p) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return np.abs(z - (p + t * d))


def hyperelliptic_w(z, regime: Regime):
    """``w(z)`` on the branch ``w(z)/z^2 -> 1``, analytic off ``J1`` and ``J2``."""
    A, B, C, D = regime.endpoints
    z = np.asarray(z, dtype=complex)
    if np.any(_distance_to_segment(z, A, B) < 1e-12) or np.any(_distance_to_segment(z, C, D) < 1e-12):
        raise OnCutError("w(z) evaluated on a branch cut")
    out = segment_root(z, A, B) * segment_root(z, C, D)
    return out[()] if out.ndim == 0 else out


def elliptic_modulus(params: ModelParams, regime: Regime) -> tuple[float, float]:
    """Modulus ``k`` and complement ``k'`` for the closed-form entropy.

    ``k'`` is built from its own closed form so it stays accurate as ``k -> 1``.
    """
    g2 = params.gamma**2
    hh = (0.5 * params.h) ** 2
    if regime.case is Case.CASE_1A:
        k2, kp2 = (hh + g2 - 1.0) / g2, (1.0 - hh) / g2
    elif regime.case is Case.CASE_2:
        k2, kp2 = g2 / (hh + g2 - 1.0), (hh - 1.0) / (hh + g2 - 1.0)
    else:
        k2, kp2 = (1.0 - hh - g2) / (1.0 - hh), g2 / (1.0 - hh)
    if not (0.0 < k2 < 1.0 and 0.0 < kp2 < 1.0):
        raise DomainError(f"elliptic modulus k^2={k2} outside (0, 1)")
    return math.sqrt(k2), math.sqrt(kp2)


@dataclass(frozen=True)
class ModuliData:
    """Periods and moduli.

    ``tau0`` comes from quadrature of the period integrals and is what every
    downstream route uses; ``tau0_elliptic = I(k')/I(k)`` is kept alongside as
    the cross-check.
    """

    c: complex
    tau: complex
    tau0: float
    k: float
    kprime: float
    tau0_elliptic: float
    quad_err: float

    def theta_params(self, tau0_min: float = TAU0_MIN) -> ThetaParams:
        return ThetaParams(self.tau0, tau0_min)

    def elliptic_agreement(self) -> float:
        """Relative gap between quadrature and elliptic ``tau0``."""
        return abs(self.tau0 - self.tau0_elliptic) / self.tau0


def _left_bank_sign(p: complex, q: complex) -> int:
    """Sign ``s`` with ``segment_root = s * i * (q - p)/2 * sqrt(1 - x^2)`` on the left bank of ``[p, q]``."""
    half, mid = 0.5 * (q - p), 0.5 * (p + q)
    probe = mid + 1e-6 * 1j * (q - p)
    ratio = segment_root(probe, p, q) / (1j * half)
    return 1 if ratio.real > 0 else -1


def cut_period(regime: Regime, tol: float = 1e-14):
    """``int_{lambdaA}^{lambdaB} dz / w`` along the left bank of ``J1``."""
    A, B, C, D = regime.endpoints
    half, mid = 0.5 * (B - A), 0.5 * (A + B)
    sign = _left_bank_sign(A, B)

    def integrand(t):
        # half dx / w = dx / (sign * i * sqrt(1-x^2) * s_J2)
        return 1.0 / (sign * 1j * segment_root(mid + half * np.cos(t), C, D))

    # integration runs x: -1 -> 1 (lambdaA -> lambdaB); node order is irrelevant
    return adaptive_chebyshev(integrand, tol)


def gap_period(regime: Regime, tol: float = 1e-14):
    """``int_{lambdaB}^{lambdaC} dz / w`` along the straight segment."""
    A, B, C, D = regime.endpoints
    half, mid = 0.5 * (C - B), 0.5 * (B + C)

    def integrand(t):
        z = mid - half * np.cos(t)  # x = -cos t runs lambdaB -> lambdaC
        c2, s2 = np.cos(0.5 * t) ** 2, np.sin(0.5 * t) ** 2
        w = segment_root(z, A, B, dq=2.0 * half * s2) * segment_root(z, C, D, dp=-2.0 * half * c2)
        return half * np.sin(t) / w

    return adaptive_chebyshev(integrand, tol)


def compute_moduli(regime: Regime, params: ModelParams, quad_tol: float = QUAD_TOL) -> ModuliData:
    """Periods by Gauss-Chebyshev quadrature, plus the elliptic moduli.

    Raises
    ------
    QuadratureError
        If either period's estimated relative error exceeds ``quad_tol``.
    PurityError
        If ``tau`` is not purely imaginary with positive imaginary part.
    """
    cut, err1 = cut_period(regime)
    gap, err2 = gap_period(regime)
    err = max(err1 / abs(cut), err2 / abs(gap))
    if err > quad_tol:
        raise QuadratureError(f"period quadrature error {err:.2e} exceeds {quad_tol:.0e}")
    c = 2.0 * cut
    tau = 2.0 * gap / c
    if abs(tau.real) > 1e-10 * abs(tau.imag) or tau.imag <= 0:
        raise PurityError(f"tau={tau!r} is not on the positive imaginary axis")
    k, kp = elliptic_modulus(params, regime)
    tau0_ell = elliptic_K(kp, k) / elliptic_K(k, kp)
    return ModuliData(c, complex(0.0, tau.imag), tau.imag, k, kp, tau0_ell, err)


def lambda_m(m, tau0: float, sigma: int):
    """Double zeros ``tanh((m + (1 - sigma)/2) pi tau0)`` of the asymptotic determinant."""
    if tau0 <= 0:
        raise DomainError("tau0 must be positive")
    out = np.tanh((np.asarray(m, dtype=float) + 0.5 * (1 - sigma)) * np.pi * tau0)
    return out[()] if out.ndim == 0 else out


def _entropy_of_tanh(u):
    """``H(tanh u)`` without cancellation for large ``u``."""
    p = expit(-2.0 * u)
    return -p * log_expit(-2.0 * u) - expit(2.0 * u) * log_expit(2.0 * u)


def _tau0_of(moduli) -> float:
    return float(getattr(moduli, "tau0", moduli))


def entropy_series(moduli, sigma: int, tau0_min: float = TAU0_MIN, cutoff: float = 1e-16) -> EntropyResult:
    """Bilateral series ``sum_{m in Z} (1 + lambda_m) ln(2 / (1 + lambda_m))``.

    ``moduli`` is a :class:`ModuliData` or a bare ``tau0``.  Since
    ``lambda_{-m} = -lambda_m`` the sum folds to ``2 sum_{m>=0} H(lambda_m)``
    for ``sigma = 0`` and to ``H(0) + 2 sum_{m>=1} H(lambda_m)`` for
    ``sigma = 1`` (the zero ``lambda_0 = 0`` is its own partner).
    """
    tau0 = _tau0_of(moduli)
    if tau0 < tau0_min:
        raise SmallTauError(f"tau0={tau0:g} < {tau0_min:g}; use entropy_small_tau")
    step = math.pi * tau0
    m_stop = int(math.ceil(45.0 / (2.0 * step))) + 2
    u = (np.arange(m_stop) + 0.5 * (1 - sigma)) * step
    h = _entropy_of_tanh(u)
    below = np.flatnonzero(h < cutoff)
    n = int(below[0]) if below.size else m_stop
    weights = np.full(n, 2.0)
    if sigma == 1:
        weights[0] = 1.0
    value = float(np.dot(weights, h[:n]))
    first_omitted = float(h[n]) if n < m_stop else 0.0
    ratio = math.exp(-2.0 * step)
    return EntropyResult(value, Method.SERIES, 2.0 * first_omitted / (1.0 - ratio))


def _theta_integrand(tp: ThetaParams, sigma: int):
    a = 0.5 * sigma * tp.tau0
    k2, k4 = (float(v) for v in log_theta3_imag_cumulants(a, tp))

    def f(x):
        x = np.asarray(x, dtype=float)
        small = x < X_CUT
        ratio = np.empty_like(x)
        if np.any(small):
            xs = x[small]
            ratio[small] = k2 * xs**2 + k4 * xs**4 / 12.0
        if np.any(~small):
            ratio[~small] = log_theta_ratio(x[~small], sigma, tp)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = ratio / np.sinh(np.pi * x) ** 2
        # x -> 0 limit
        return np.where(x == 0.0, k2 / np.pi**2, val)

    return f


def entropy_integral(
    moduli, sigma: int, tau0_min: float = TAU0_MIN, tol: float = 1e-13
) -> EntropyResult:
    """``(pi/2) int_0^inf log_theta_ratio(x) dx / sinh^2(pi x)`` by adaptive Gauss-Legendre."""
    tp = ThetaParams(_tau0_of(moduli), tau0_min)
    f = _theta_integrand(tp, sigma)
    upper = 2.0
    while abs(f(np.array([upper]))[0]) > 1e-18:
        upper *= 1.5
    try:
        head, e1 = adaptive_gauss_legendre(f, 0.0, X_CUT, tol * 1e-3)
        body, e2 = adaptive_gauss_legendre(f, X_CUT, upper, tol)
    except QuadratureError as exc:
        raise QuadratureError(f"theta integral failed: {exc}") from exc
    return EntropyResult(0.5 * math.pi * (head + body), Method.INTEGRAL, 0.5 * math.pi * (e1 + e2))


def entropy_closed(params: ModelParams, regime: Regime) -> EntropyResult:
    """Closed form through complete elliptic integrals.

    Case 1 (a and b): ``(1/6)[ln(k^2/(16 k')) + (1 - k^2/2) 4 I(k) I(k')/pi] + ln 2``.
    Case 2: ``(1/12)[ln(16/(k^2 k'^2)) + (k^2 - k'^2) 4 I(k) I(k')/pi]``.
    """
    k, kp = elliptic_modulus(params, regime)
    prod = 4.0 * elliptic_K(k, kp) * elliptic_K(kp, k) / math.pi
    if regime.case is Case.CASE_2:
        value = (math.log(16.0 / (k * k * kp * kp)) + (k * k - kp * kp) * prod) / 12.0
    else:
        value = (math.log(k * k / (16.0 * kp)) + (1.0 - 0.5 * k * k) * prod) / 6.0 + math.log(2.0)
    return EntropyResult(value, Method.CLOSED_FORM, 8 * np.finfo(float).eps * max(1.0, abs(prod)))


def entropy_small_tau(tau0: float) -> EntropyResult:
    """Leading small-tau law ``S = pi / (6 tau0)``."""
    if tau0 <= 0:
        raise DomainError("tau0 must be positive")
    err = math.exp(-math.pi / tau0) / tau0**2
    return EntropyResult(math.pi / (6.0 * tau0), Method.SMALL_TAU, err)


def entropy_critical_h(params: ModelParams) -> EntropyResult:
    """``-(1/6) ln|2 - h| + (1/3) ln(4 gamma)`` for ``h`` near 2."""
    d = abs(2.0 - params.h)
    if not (0.0 < d < 0.1):
        raise DomainError(f"critical-field law needs 0 < |h-2| < 0.1, got {d}")
    value = -math.log(d) / 6.0 + math.log(4.0 * params.gamma) / 3.0
    return EntropyResult(value, Method.CRITICAL_H, d * math.log(d) ** 2)


def entropy_xx_limit(params: ModelParams) -> EntropyResult:
    """``-(1/3) ln gamma + (1/6) ln(4 - h^2) + (1/3) ln 2`` for small ``gamma``, ``h < 2``."""
    g, h = params.gamma, params.h
    if not (g <= 0.1 and h < 2.0):
        raise DomainError("XX-limit law needs gamma <= 0.1 and h < 2")
    value = -math.log(g) / 3.0 + math.log(4.0 - h * h) / 6.0 + math.log(2.0) / 3.0
    return EntropyResult(value, Method.XX_LIMIT, g * math.log(g) ** 2)


def beta(lam: complex) -> complex:
    """``(1 / 2 pi i) ln((lam + 1)/(lam - 1))``, principal log.

    Evaluated as ``artanh(1/lam) / (pi i)``: same function on the plane cut
    along ``[-1, 1]``, without cancellation at large ``|lam|``.
    """
    lam = complex(lam)
    return cmath.atanh(1.0 / lam) / (1j * math.pi)


def excluded_points(moduli, sigma: int) -> np.ndarray:
    """``+-1`` and every ``+-lambda_m`` that is numerically distinct from 1."""
    tau0 = _tau0_of(moduli)
    m = np.arange(int(math.ceil(20.0 / (math.pi * tau0))) + 2)
    lm = lambda_m(m, tau0, sigma)
    lm = lm[lm < 1.0]
    return np.concatenate([[1.0, -1.0], lm, -lm])


def det_asymptotic(
    lam: complex, L: int, moduli, sigma: int, radius: float = 1e-3, tau0_min: float = TAU0_MIN
) -> LogValue:
    """Large-L Toeplitz determinant in log form.

    ``ln D_L = L ln(lam^2 - 1) + i pi L + ln theta3(beta + sigma tau/2)
    + ln theta3(beta - sigma tau/2) - 2 ln theta3(sigma tau/2)``.

    Raises
    ------
    ExcludedPointError
        Within ``radius`` of ``+-1`` or of any ``+-lambda_m``.
    """
    lam = complex(lam)
    pts = excluded_points(moduli, sigma)
    if np.any(np.abs(lam - pts) < radius):
        raise ExcludedPointError(f"lambda={lam} lies within {radius:g} of +-1 or a zero +-lambda_m")
    tp = ThetaParams(_tau0_of(moduli), tau0_min)
    b = beta(lam)
    shift = 0.5 * sigma * tp.tau
    logs = (
        L * cmath.log(lam * lam - 1.0)
        + 1j * math.pi * L
        + complex(log_theta3(b + shift, tp))
        + complex(log_theta3(b - shift, tp))
        - 2.0 * complex(log_theta3(shift, tp))
    )
    return LogValue.from_log(logs)
