"""Small quadrature helpers: Gauss-Chebyshev and adaptive Gauss-Legendre."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import QuadratureError


@lru_cache(maxsize=8)
def _legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def gauss_chebyshev(func, n: int) -> complex:
    """``int_{-1}^{1} F(x) / sqrt(1 - x^2) dx`` with ``n`` first-kind nodes.

    ``func`` receives the node angles ``t`` (``x = cos t``) so callers can
    form ``1 +- x`` and ``sqrt(1 - x^2)`` without cancellation.
    """
    t = (2.0 * np.arange(1, n + 1) - 1.0) * np.pi / (2.0 * n)
    return np.pi / n * np.sum(func(t))


def adaptive_chebyshev(func, tol: float, n0: int = 32, n_max: int = 1 << 20):
    """Double the node count until two successive rules agree to ``tol`` (relative).

    Returns ``(value, error_estimate)``; the estimate is the last difference.
    """
    n = n0
    prev = gauss_chebyshev(func, n)
    while True:
        n *= 2
        cur = gauss_chebyshev(func, n)
        err = abs(cur - prev)
        if err <= tol * abs(cur) or n >= n_max:
            return cur, err
        prev = cur


def adaptive_gauss_legendre(func, a: float, b: float, tol: float, order: int = 20, max_depth: int = 50):
    """Adaptive bisection with fixed-order Gauss-Legendre panels.

    A panel is accepted when its single-panel estimate and the sum over its
    two halves differ by less than its share of ``tol`` (absolute).
    Returns ``(value, error_estimate)``.
    """
    x, w = _legendre(order)

    def panel(lo, hi):
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        return half * np.dot(w, func(mid + half * x))

    total, err_total = 0.0, 0.0
    stack = [(a, b, panel(a, b), 0)]
    span = b - a
    while stack:
        lo, hi, coarse, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = panel(lo, mid), panel(mid, hi)
        fine = left + right
        err = abs(fine - coarse)
        if err <= tol * (hi - lo) / span or err < 1e-15 * abs(fine):
            total += fine
            err_total += err
        elif depth >= max_depth:
            raise QuadratureError(f"adaptive Gauss-Legendre stalled on [{lo}, {hi}]")
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return total, err_total
