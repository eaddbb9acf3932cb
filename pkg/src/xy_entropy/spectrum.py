"""Finite-L correlation matrix, its canonical spectrum and the exact entropy.

``B_L`` is the ``2L x 2L`` real antisymmetric block Toeplitz matrix with
blocks ``Pi_{j-k}``, where

    Pi_l = (1/2pi) int_0^{2pi} exp(-i l theta) [[0, g], [-1/g, 0]] dtheta.

Because ``g(-theta) = conj g(theta)`` the Fourier coefficients ``c_l`` of
``g`` are real, and ``1/g = conj g`` has coefficients ``c_{-l}``, so
``Pi_l = [[0, c_l], [-c_{-l}, 0]]``.  The eigenvalues of ``B_L`` come in
pairs ``+-i nu_m`` and the block entropy is ``sum_m H(nu_m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, NumericalError, SizeError
from .model import ModelParams, symbol_g
from .results import EntropyResult, LogValue, Method

L_MAX = 512
_TAIL_TOL = 1e-15
_N_CAP = 1 << 22


def binary_entropy(nu):
    """``H(nu) = -(1+nu)/2 ln((1+nu)/2) - (1-nu)/2 ln((1-nu)/2)``."""
    nu = np.asarray(nu, dtype=float)
    if np.any(np.abs(nu) > 1.0 + 1e-12):
        raise DomainError("binary_entropy needs |nu| <= 1")
    nu = np.clip(nu, -1.0, 1.0)
    p, q = 0.5 * (1.0 + nu), 0.5 * (1.0 - nu)
    out = -xlogy(p, p) - xlogy(q, q)
    return out[()] if out.ndim == 0 else out


def scaled_entropy(x, nu):
    """``e(x, nu) = -(x+nu)/2 ln((x+nu)/2) - (x-nu)/2 ln((x-nu)/2)``; ``e(1, nu) = H(nu)``."""
    x = np.asarray(x, dtype=float)
    nu = np.asarray(nu, dtype=float)
    p, q = 0.5 * (x + nu), 0.5 * (x - nu)
    return -xlogy(p, p) - xlogy(q, q)


def default_grid_size(L: int) -> int:
    n = max(1024, 8 * L)
    return 1 << (n - 1).bit_length()


def symbol_coefficients(params: ModelParams, N: int) -> np.ndarray:
    """Fourier coefficients ``c_l`` of ``g`` on an ``N``-point grid.

    Index ``l`` (negative allowed) is read as ``c[l % N]``.  The values are
    real; the discarded imaginary parts are O(machine epsilon).
    """
    if N < 8 or N & (N - 1):
        raise DomainError(f"grid size must be a power of two >= 8, got {N}")
    theta = 2.0 * np.pi * np.arange(N) / N
    return (np.fft.fft(symbol_g(theta, params)) / N).real


def _resolved_coefficients(params: ModelParams, L: int) -> np.ndarray:
    """Coefficients on a grid doubled until the aliased tail is negligible.

    Close to a phase boundary ``g`` is nearly singular and its coefficients
    decay slowly, so the base grid is not always enough.
    """
    N = default_grid_size(L)
    while True:
        c = symbol_coefficients(params, N)
        tail = np.abs(c[N // 2 - N // 8 : N // 2 + N // 8]).max()
        if tail < _TAIL_TOL or N >= _N_CAP:
            return c
        N *= 2


def fourier_pi(l: int, params: ModelParams, N: int | None = None) -> np.ndarray:
    """The 2x2 block ``Pi_l``."""
    if N is None:
        N = default_grid_size(abs(l) + 1)
    if N < 8 * (abs(l) + 1):
        raise DomainError(f"N={N} too small for l={l}; need N >= 8(|l|+1)")
    c = symbol_coefficients(params, N)
    return np.array([[0.0, c[l % N]], [-c[-l % N], 0.0]])


@dataclass(frozen=True)
class CorrelationMatrix:
    L: int
    B: np.ndarray

    def block(self, j: int, k: int) -> np.ndarray:
        return self.B[2 * j : 2 * j + 2, 2 * k : 2 * k + 2]

    def antisymmetry_residual(self) -> float:
        return float(np.abs(self.B + self.B.T).max())


def build_B(L: int, params: ModelParams, L_max: int = L_MAX) -> CorrelationMatrix:
    """Assemble ``B_L`` from the blocks ``Pi_{j-k}``, ``j, k = 0..L-1``."""
    if L < 1:
        raise DomainError(f"L must be positive, got {L}")
    if L > L_max:
        raise SizeError(f"L={L} exceeds L_max={L_max}")
    c = _resolved_coefficients(params, L)
    N = c.size
    j = np.arange(L)
    diff = j[:, None] - j[None, :]
    B = np.zeros((2 * L, 2 * L))
    B[0::2, 1::2] = c[diff % N]
    B[1::2, 0::2] = -c[-diff % N]
    return CorrelationMatrix(L, B)


@dataclass(frozen=True)
class SpectrumResult:
    """Nonnegative representatives ``nu_m`` of the eigenvalue pairs, descending."""

    nu: np.ndarray

    @property
    def L(self) -> int:
        return self.nu.size


def spectrum_nu(cm: CorrelationMatrix) -> SpectrumResult:
    """Canonical-form numbers ``nu_m`` from the Hermitian matrix ``i B``."""
    L = cm.L
    ev = np.linalg.eigvalsh(1j * cm.B)
    upper, lower = ev[L:], -ev[:L][::-1]
    if np.abs(upper - lower).max() > 1e-9:
        raise NumericalError("eigenvalues of B do not come in +-i nu pairs")
    nu = np.abs(upper)[::-1]
    if nu[0] > 1.0 + 1e-8:
        raise NumericalError(f"nu={nu[0]!r} exceeds 1; symbol or assembly is broken")
    return SpectrumResult(np.minimum(nu, 1.0))


def entropy_exact(L: int, params: ModelParams, L_max: int = L_MAX) -> EntropyResult:
    """Block entropy ``sum_m H(nu_m)`` for finite ``L``."""
    nu = spectrum_nu(build_B(L, params, L_max)).nu
    value = float(binary_entropy(nu).sum())
    # |H'(nu)| = artanh(nu) ~ ln(2/(1-nu))/2; eigenvalues carry O(eps) absolute error
    slope = np.log(2.0 / np.maximum(1.0 - nu, 1e-300))
    err = float(np.finfo(float).eps * 2 * L * (1.0 + slope.sum()))
    return EntropyResult(value, Method.EXACT_FINITE_L, err)


def log_det_exact(lam: complex, spectrum: SpectrumResult) -> LogValue:
    """``log D_L(lam)`` with ``D_L = (-1)^L prod_m (lam^2 - nu_m^2)``."""
    lam = complex(lam)
    factors = lam * lam - spectrum.nu.astype(complex) ** 2
    logs = np.log(factors)
    return LogValue.from_log(complex(logs.real.sum(), logs.imag.sum() + math.pi * spectrum.L))


def det_exact(lam: complex, spectrum: SpectrumResult) -> complex:
    """``D_L(lam) = (-1)^L prod_m (lam^2 - nu_m^2)``."""
    lam = complex(lam)
    value = (-1) ** spectrum.L * np.prod(lam * lam - spectrum.nu**2)
    if lam.imag == 0.0:
        return complex(value.real, 0.0)
    return complex(value)


def merged_pairs(spectrum: SpectrumResult, sigma: int) -> list[np.ndarray]:
    """Group the ``nu_m`` by the zero ``lambda_m`` they approach at large L.

    ``nu`` is sorted ascending.  For ``sigma = 0`` consecutive pairs
    ``(nu_{2m}, nu_{2m+1})`` go to ``lambda_m``.  For ``sigma = 1`` the zero
    ``lambda_0 = 0`` takes a single ``nu`` (its double zero in ``D_L`` is the
    pair ``+-nu``), after which pairs ``(nu_{2m-1}, nu_{2m})`` go to
    ``lambda_m``.
    """
    asc = np.sort(spectrum.nu)
    groups = []
    start = 0
    if sigma == 1:
        groups.append(asc[:1])
        start = 1
    for i in range(start, asc.size - 1, 2):
        groups.append(asc[i : i + 2])
    return groups
