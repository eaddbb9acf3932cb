"""Couplings of the XY chain, phase classification and the symbol on the circle.

The chain has anisotropy ``gamma`` and transverse field ``h``.  The
ground-state correlations enter only through the unimodular symbol

    g(theta) = (cos theta - i gamma sin theta - h/2) / |cos theta - i gamma sin theta - h/2|

and, for the determinant problem, through the 2x2 generator

    Phi(z) = [[i lam, phi(z)], [-1/phi(z), i lam]]

whose scalar entry ``phi`` is a square root of a rational function with
branch points at ``lambda_1, lambda_2, 1/lambda_1, 1/lambda_2``.  With the
branch fixed by ``phi(inf) > 0`` one finds ``phi(e^{i theta}) = -g(theta)``
on the unit circle (see :func:`phi_continued`), so ``Phi`` is exactly the
symbol of ``i lam I - B_L``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError, PhaseBoundaryError

DEFAULT_EPS_PHASE = 1e-8


class Case(enum.Enum):
    """Region of the (gamma, h) plane."""

    CASE_1A = "1a"  # 2 sqrt(1 - gamma^2) < h < 2
    CASE_1B = "1b"  # 0 < h < 2 sqrt(1 - gamma^2)
    CASE_2 = "2"  # h > 2

    @property
    def sigma(self) -> int:
        return 0 if self is Case.CASE_2 else 1


@dataclass(frozen=True)
class ModelParams:
    """Anisotropy and transverse field, both dimensionless."""

    gamma: float
    h: float

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0):
            raise DomainError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not (self.h > 0.0 and math.isfinite(self.h)):
            raise DomainError(f"h must be positive and finite, got {self.h}")

    @property
    def h_inner(self) -> float:
        """Field ``2 sqrt(1 - gamma^2)`` separating Case 1b from Case 1a."""
        return 2.0 * math.sqrt((1.0 - self.gamma) * (1.0 + self.gamma))


@dataclass(frozen=True)
class Regime:
    """Case label, sigma flag, branch points and cut endpoints.

    The cuts are ``J1 = [lambdaA, lambdaB]`` and ``J2 = [lambdaC, lambdaD]``.
    """

    case: Case
    sigma: int
    lambda1: complex
    lambda2: complex
    lambdaA: complex
    lambdaB: complex
    lambdaC: complex
    lambdaD: complex

    @property
    def endpoints(self) -> tuple[complex, complex, complex, complex]:
        return (self.lambdaA, self.lambdaB, self.lambdaC, self.lambdaD)


def phase_case(params: ModelParams) -> Case:
    """Case predicate straight from the defining inequalities."""
    if params.h > 2.0:
        return Case.CASE_2
    if params.h > params.h_inner:
        return Case.CASE_1A
    return Case.CASE_1B


def distance_to_boundary(params: ModelParams) -> float:
    return min(abs(params.h - 2.0), abs(params.h - params.h_inner))


def classify(params: ModelParams, eps_phase: float = DEFAULT_EPS_PHASE) -> Regime:
    """Classify ``params`` and compute the branch points and cut endpoints.

    Raises
    ------
    PhaseBoundaryError
        If ``h`` lies within ``eps_phase`` of ``2`` or ``2 sqrt(1 - gamma^2)``.
    """
    g, h = params.gamma, params.h
    if abs(h - 2.0) < eps_phase:
        raise PhaseBoundaryError(f"h={h} is within {eps_phase:g} of the critical field h=2")
    if abs(h - params.h_inner) < eps_phase:
        raise PhaseBoundaryError(
            f"h={h} is within {eps_phase:g} of the boundary h=2*sqrt(1-gamma^2)={params.h_inner:.12g}"
        )
    case = phase_case(params)
    disc = h * h - 4.0 * (1.0 - g) * (1.0 + g)
    if case is Case.CASE_1B:
        lam1 = complex(h, -math.sqrt(-disc)) / (2.0 * (1.0 + g))
        lam2 = 1.0 / lam1.conjugate()
    else:
        lam1 = complex((h - math.sqrt(disc)) / (2.0 * (1.0 + g)))
        lam2 = lam1 * (1.0 + g) / (1.0 - g)

    if case is Case.CASE_1A:
        ends = (lam1, 1.0 / lam2, lam2, 1.0 / lam1)
    elif case is Case.CASE_1B:
        ends = (lam1, 1.0 / lam2, 1.0 / lam1, lam2)
    else:
        ends = (lam1, lam2, 1.0 / lam2, 1.0 / lam1)
    return Regime(case, case.sigma, lam1, lam2, *ends)


def symbol_g(theta, params: ModelParams):
    """Unimodular symbol ``g(theta)``; accepts scalars or arrays."""
    # reduce first so that theta = 2 pi gives exactly g(0)
    theta = np.remainder(np.asarray(theta, dtype=float), 2 * np.pi)
    v = np.cos(theta) - 0.5 * params.h - 1j * params.gamma * np.sin(theta)
    mod = np.abs(v)
    if np.any(mod < 1e-14):
        raise DegenerateError("symbol modulus vanishes; parameters sit on a phase boundary")
    out = v / mod
    return out[()] if out.ndim == 0 else out


def phi_on_circle(theta, params: ModelParams):
    """``phi(e^{i theta})`` on the branch with ``phi(inf) > 0``."""
    return -symbol_g(theta, params)


def phi_squared(z, regime: Regime):
    """The rational function under the square root defining ``phi``."""
    z = np.asarray(z, dtype=complex)
    l1, l2 = regime.lambda1, regime.lambda2
    c1, c2 = l1.conjugate(), l2.conjugate()
    return (c1 / l1) * (1 - l1 * z) * (1 - l2 / z) / ((1 - c1 / z) * (1 - c2 * z))


def phi_continued(theta, regime: Regime, n_path: int = 4000):
    """Evaluate ``phi`` on the unit circle by analytic continuation from infinity.

    The path runs down the positive imaginary axis from ``i*1e4`` to ``i``
    (no cut crosses it in any case), then anticlockwise around the circle.
    At each step the square-root sign nearest the previous value is kept,
    starting from the positive root at infinity.  Used to pin the relation
    between ``phi`` and ``g``.
    """
    theta = np.mod(np.asarray(theta, dtype=float), 2 * np.pi)
    order = np.argsort(np.mod(theta - np.pi / 2, 2 * np.pi))
    arc = np.mod(theta[order] - np.pi / 2, 2 * np.pi)
    fill = np.linspace(0.0, 2 * np.pi, 8 * n_path, endpoint=False)
    arc_all = np.union1d(fill, arc)
    path = np.concatenate([1j * np.logspace(4, 0, n_path), np.exp(1j * (np.pi / 2 + arc_all))])
    roots = np.sqrt(phi_squared(path, regime))
    # sqrt(lam1^*/lam1 * lam1/lam2^*) is real positive up to O(1/z) at i*1e4
    prev = roots[0] if roots[0].real > 0 else -roots[0]
    values = np.empty_like(roots)
    for i, r in enumerate(roots):
        prev = r if abs(r - prev) <= abs(r + prev) else -r
        values[i] = prev
    on_arc = values[n_path:]
    picked = on_arc[np.searchsorted(arc_all, arc)]
    out = np.empty(theta.shape, dtype=complex)
    out[order] = picked
    return out


def generator_Phi(z, lam, params: ModelParams):
    """Generator ``Phi(z)`` for ``|z| = 1``; returns shape ``(..., 2, 2)``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(np.abs(z) - 1.0) > 1e-12):
        raise DomainError("generator_Phi is only evaluated on the unit circle")
    phi = phi_on_circle(np.angle(z), params)
    out = np.empty(z.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1j * lam
    out[..., 1, 1] = 1j * lam
    out[..., 0, 1] = phi
    out[..., 1, 0] = -1.0 / phi
    return out
