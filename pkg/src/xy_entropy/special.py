"""Complete elliptic integral of the first kind and the theta function theta_3.

Only a purely imaginary modular parameter ``tau = i tau0`` is supported.
With nome ``q = exp(-pi tau0)``,

    theta3(s) = sum_n q^{n^2} exp(2 pi i s n).

For ``s = u + i v`` the terms peak near ``n0 = -v / tau0``; completing the
square gives

    theta3(s) = exp(pi v^2 / tau0) * sum_n exp(-pi tau0 (n - n0)^2) exp(2 pi i u n)

and the rescaled sum is evaluated over a window around ``n0``.  This keeps
``log_theta3`` finite for any ``Im s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import ConvergenceError, DomainError, SmallTauError

N_MAX = 100_000
TAU0_MIN = 0.02
# window half-width M satisfies pi tau0 (M - 1/2)^2 > 37: omitted terms < 1e-16 of the peak term
_TAIL_EXPONENT = 38.0


def elliptic_K(k: float, kprime: float | None = None) -> float:
    """``I(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t)`` by the AGM.

    Pass ``kprime = sqrt(1 - k^2)`` when it is known more accurately than
    ``k`` itself (``k`` close to 1).

    >>> round(elliptic_K(0.0), 15) == round(math.pi / 2, 15)
    True
    """
    k = float(k)
    if kprime is None:
        if not (0.0 <= abs(k) < 1.0):
            raise DomainError(f"elliptic_K needs |k| < 1, got {k}")
        kprime = math.sqrt((1.0 - k) * (1.0 + k))
    elif not (0.0 < kprime <= 1.0):
        raise DomainError(f"elliptic_K needs 0 < k' <= 1, got {kprime}")
    a, b = 1.0, float(kprime)
    for _ in range(40):
        if abs(a - b) <= 1e-15 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    else:  # pragma: no cover - quadratic convergence makes this unreachable
        raise ConvergenceError("AGM did not converge")
    return math.pi / (a + b)


def agm_iterations(k: float) -> int:
    """Number of AGM steps :func:`elliptic_K` takes for modulus ``k``."""
    a, b = 1.0, math.sqrt((1.0 - k) * (1.0 + k))
    n = 0
    while abs(a - b) > 1e-15 * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        n += 1
    return n


@dataclass(frozen=True)
class ThetaParams:
    """Modular data for ``tau = i tau0``."""

    tau0: float
    tau0_min: float = TAU0_MIN
    q: float = field(init=False)

    def __post_init__(self):
        if not (self.tau0 > 0 and math.isfinite(self.tau0)):
            raise DomainError(f"tau0 must be positive, got {self.tau0}")
        if self.tau0 < self.tau0_min:
            raise SmallTauError(
                f"tau0={self.tau0:g} < {self.tau0_min:g}; use the small-tau asymptotics instead"
            )
        object.__setattr__(self, "q", math.exp(-math.pi * self.tau0))

    @property
    def tau(self) -> complex:
        return 1j * self.tau0

    @property
    def half_width(self) -> int:
        """Terms kept on each side of the peak of the series."""
        m = int(math.ceil(math.sqrt(_TAIL_EXPONENT / (math.pi * self.tau0)))) + 1
        if m > N_MAX:
            raise ConvergenceError(f"theta series needs {m} terms (> {N_MAX})")
        return m


def _window(v, tp: ThetaParams):
    n0 = -np.asarray(v, dtype=float) / tp.tau0
    m = tp.half_width
    n = np.rint(n0)[..., None] + np.arange(-m, m + 1)
    return n0, n


def _scaled_sum(s, tp: ThetaParams):
    s = np.asarray(s, dtype=complex)
    n0, n = _window(s.imag, tp)
    d = n - n0[..., None]
    terms = np.exp(-np.pi * tp.tau0 * d * d + 2j * np.pi * s.real[..., None] * n)
    return np.pi * s.imag**2 / tp.tau0, terms.sum(axis=-1)


def log_theta3(s, tp: ThetaParams):
    """Principal-branch ``log theta3(s)``, overflow-free for large ``Im s``."""
    expo, total = _scaled_sum(s, tp)
    with np.errstate(divide="ignore"):
        out = expo + np.log(total)
    return out[()] if np.ndim(out) == 0 else out


def theta3(s, tp: ThetaParams, s_max: float = 40.0):
    """``theta3(s)`` for ``|Im s| <= s_max * tau0``.

    Use :func:`log_theta3` when the value itself would overflow.
    """
    s_arr = np.asarray(s, dtype=complex)
    if np.any(np.abs(s_arr.imag) > s_max * tp.tau0):
        raise DomainError(f"|Im s| exceeds s_max*tau0 = {s_max * tp.tau0:g}; use log_theta3")
    expo, total = _scaled_sum(s_arr, tp)
    out = np.exp(expo) * total
    return out[()] if np.ndim(out) == 0 else out


def log_theta3_imag(y, tp: ThetaParams):
    """``log theta3(i y)`` for real ``y``; the value is real and positive-argument."""
    n0, n = _window(y, tp)
    d = n - n0[..., None]
    total = np.exp(-np.pi * tp.tau0 * d * d).sum(axis=-1)
    y = np.asarray(y, dtype=float)
    out = np.pi * y * y / tp.tau0 + np.log(total)
    return out[()] if np.ndim(out) == 0 else out


def log_theta3_imag_cumulants(y, tp: ThetaParams):
    """Second and fourth derivatives of ``y -> log theta3(i y)``.

    ``theta3(i y) = sum_n exp(-pi tau0 n^2 - 2 pi y n)``, so the derivatives
    of its log are the cumulants of ``X = -2 pi n`` under the weights of the
    individual terms.
    """
    n0, n = _window(y, tp)
    d = n - n0[..., None]
    w = np.exp(-np.pi * tp.tau0 * d * d)
    w /= w.sum(axis=-1, keepdims=True)
    x = -2.0 * np.pi * n
    mean = (w * x).sum(axis=-1, keepdims=True)
    c = x - mean
    m2 = (w * c**2).sum(axis=-1)
    m4 = (w * c**4).sum(axis=-1)
    return m2, m4 - 3.0 * m2**2


def _ratio_by_pairs(x, a: float, tp: ThetaParams, x_reach: float):
    """Small-x branch of :func:`log_theta_ratio`, free of cancellation.

    With ``p_n`` the normalised terms of ``theta3(i a)``,
    ``theta3(i(a+x)) theta3(i(a-x)) / theta3(i a)^2 = E[cosh(2 pi x D)]``
    where ``D = n - n'`` for independent ``n, n' ~ p``.  Hence
    ``log ratio = log1p(sum_d P(D=d) 2 sinh^2(pi x d))``.
    """
    n0 = -a / tp.tau0
    m = tp.half_width + int(math.ceil(x_reach / tp.tau0)) + 1
    n = np.rint(n0) + np.arange(-m, m + 1)
    p = np.exp(-np.pi * tp.tau0 * (n - n0) ** 2)
    p /= p.sum()
    pd = np.correlate(p, p, mode="full")
    d = np.abs(np.arange(-2 * m, 2 * m + 1, dtype=float))
    keep = (d > 0) & (pd > 0)
    log_pd, d = np.log(pd[keep]), d[keep]
    u = np.pi * x[:, None] * d[None, :]
    with np.errstate(divide="ignore"):
        # log(2 sinh^2 u) = 2u + 2 log(1 - e^{-2u}) - log 2
        terms = log_pd + 2.0 * u + 2.0 * np.log(-np.expm1(-2.0 * u)) - math.log(2.0)
    return np.logaddexp(0.0, logsumexp(terms, axis=-1))


def log_theta_ratio(x, sigma: int, tp: ThetaParams, x_switch: float = 0.25):
    """``log[theta3(ix + s tau/2) theta3(ix - s tau/2) / theta3(s tau/2)^2]``, ``s = sigma``.

    With ``tau`` purely imaginary every factor is real and positive, so the
    result is real.  Below ``x_switch`` the pair-difference form is used;
    above it the ratio is a plain second difference of
    :func:`log_theta3_imag`, which no longer suffers from cancellation.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("log_theta_ratio needs x >= 0")
    a = 0.5 * sigma * tp.tau0
    flat = np.atleast_1d(x).ravel()
    out = np.empty_like(flat)
    small = flat < x_switch
    if np.any(small):
        out[small] = _ratio_by_pairs(flat[small], a, tp, x_switch)
    if np.any(~small):
        xb = flat[~small]
        out[~small] = log_theta3_imag(xb + a, tp) + log_theta3_imag(xb - a, tp) - 2.0 * log_theta3_imag(a, tp)
    out = out.reshape(x.shape)
    return out[()] if out.ndim == 0 else out
