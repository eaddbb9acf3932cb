"""Nystrom discretisation of the integrable operator whose determinant is D_L.

On the unit circle, with ``f1 = z^L I``, ``f2 = I``, ``h1 = z^{-L}(I - Phi)/(2 pi i)``
and ``h2 = -(I - Phi)/(2 pi i)``, the kernel ``f^T(z) h(z') / (z - z')`` is

    K(z, z') = [(z/z')^L - 1] (I - Phi(z')) / (2 pi i (z - z'))

and ``D_L(lam) = det(I - K)``.  The trapezoidal rule on ``N`` equispaced
nodes is spectrally accurate for this periodic analytic kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError
from .model import ModelParams, generator_Phi

_I2 = np.eye(2)


@dataclass(frozen=True)
class KernelSpec:
    L: int
    lam: complex
    params: ModelParams
    N: int

    def __post_init__(self):
        if self.L < 0:
            raise DomainError("L must be nonnegative")
        if self.N % 2 or self.N < max(16 * self.L, 2):
            raise DomainError(f"N must be even and >= 16 L, got N={self.N}, L={self.L}")


def kernel_K(z: complex, zp: complex, spec: KernelSpec) -> np.ndarray:
    """2x2 kernel block ``K(z, z')``, with the analytic limit on the diagonal."""
    if abs(abs(z) - 1.0) > 1e-12 or abs(abs(zp) - 1.0) > 1e-12:
        raise DomainError("kernel points must lie on the unit circle")
    jump = _I2 - generator_Phi(zp, spec.lam, spec.params)
    if z == zp:
        scale = spec.L / z
    else:
        scale = ((z / zp) ** spec.L - 1.0) / (z - zp)
    return scale * jump / (2j * np.pi)


def nystrom_matrix(spec: KernelSpec) -> np.ndarray:
    """``[K(z_j, z_k) w_k]`` as a ``2N x 2N`` matrix, ``w_k = 2 pi i z_k / N``."""
    N, L = spec.N, spec.L
    z = np.exp(2j * np.pi * np.arange(N) / N)
    jump = _I2 - generator_Phi(z, spec.lam, spec.params)  # (N, 2, 2)
    ratio = z[:, None] / z[None, :]
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    scale = (ratio**L - 1.0) / diff
    np.fill_diagonal(scale, L / z)
    # the 2 pi i of the weight cancels the 1/(2 pi i) of the kernel
    scale *= z[None, :] / N
    blocks = scale[:, None, :, None] * jump.transpose(1, 0, 2)[None, :, :, :]
    return blocks.reshape(2 * N, 2 * N)


def fredholm_det(spec: KernelSpec) -> complex:
    """``det(I - K)`` by the Nystrom method.

    Raises
    ------
    SingularityError
        For real ``lam`` with ``|lam| <= 1``.
    """
    lam = complex(spec.lam)
    if lam.imag == 0.0 and abs(lam.real) <= 1.0:
        raise SingularityError(f"lambda={lam.real} lies in [-1, 1]")
    if spec.L == 0:
        return 1.0 + 0.0j
    sign, logdet = np.linalg.slogdet(np.eye(2 * spec.N) - nystrom_matrix(spec))
    return complex(sign * np.exp(logdet))
