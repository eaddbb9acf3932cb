"""Acceptance suite.

Each criterion is a function returning ``(passed, detail)``.  The pytest
wrappers print one ``PASS``/``FAIL`` line per criterion and then assert.
Run directly (``python tests/test_acceptance.py``) for the summary alone.
"""

import math
import sys
import time

import numpy as np
import pytest

from xy_entropy.asymptotics import (
    compute_moduli,
    det_asymptotic,
    entropy_closed,
    entropy_critical_h,
    entropy_integral,
    entropy_series,
    entropy_xx_limit,
    lambda_m,
)
from xy_entropy.fredholm import KernelSpec, fredholm_det
from xy_entropy.harness import convergence_study
from xy_entropy.model import ModelParams, classify
from xy_entropy.spectrum import build_B, det_exact, log_det_exact, merged_pairs, spectrum_nu
from xy_entropy.special import ThetaParams, elliptic_K, log_theta3_imag, theta3

GRID_G = tuple(np.linspace(0.15, 0.85, 7))
GRID_H = (0.5, 1.0, 1.5, 1.9, 2.5, 3.0, 4.0)
BAND = 1e-3

# int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t), 30-digit adaptive quadrature
K_ORACLE = {
    0.1: 1.57474556151735595344,
    0.2: 1.58686784745416624050,
    0.3: 1.60804861993051281193,
    0.4: 1.63999986586451122171,
    0.5: 1.68575035481259604287,
    0.6: 1.75075380291575259207,
    0.7: 1.84569399837472360227,
    0.8: 1.99530277766472953827,
    0.9: 2.28054913842277033245,
}


def _grid():
    for g in GRID_G:
        for h in GRID_H:
            p = ModelParams(g, h)
            if abs(h - 2.0) > BAND and abs(h - p.h_inner) > BAND:
                yield p


def _setup(gamma, h):
    p = ModelParams(gamma, h)
    r = classify(p)
    return p, r, compute_moduli(r, p)


def criterion_1():
    t0 = time.perf_counter()
    worst, cases, n = 0.0, set(), 0
    for p in _grid():
        r = classify(p)
        m = compute_moduli(r, p)
        s = entropy_series(m, r.sigma).value
        worst = max(worst, abs(s - entropy_integral(m, r.sigma).value), abs(s - entropy_closed(p, r).value))
        cases.add(r.case)
        n += 1
    dt = time.perf_counter() - t0
    ok = worst < 1e-8 and dt < 5.0 and len(cases) == 3
    return ok, f"{n} points, {len(cases)} cases, max delta {worst:.2e}, {dt:.2f} s"


def criterion_2():
    t0 = time.perf_counter()
    st = convergence_study(0.5, 1.0, 64)
    dt = time.perf_counter() - t0
    tail = float(st.delta[39:].max())
    rel = st.relative_rate_error
    ok = tail < 1e-6 and rel < 0.15 and dt < 10.0
    return ok, (
        f"max |S_L - S_inf| for L>=40 {tail:.2e}; slope {st.slope:.4f} vs {st.reference_slope:.4f} "
        f"(rel err {rel:.2f}, {st.fit_points} fit points); {dt:.2f} s"
    )


def criterion_3():
    t0 = time.perf_counter()
    worst, cases = 0.0, set()
    for gamma, h in [(0.8, 1.5), (0.5, 1.0), (0.5, 3.0)]:
        p = ModelParams(gamma, h)
        cases.add(classify(p).case)
        for L in range(1, 7):
            spec = spectrum_nu(build_B(L, p))
            for lam in (2.0, 2j):
                ex = det_exact(lam, spec)
                fd = fredholm_det(KernelSpec(L, lam, p, 512))
                worst = max(worst, abs(fd - ex) / abs(ex))
    dt = time.perf_counter() - t0
    ok = worst < 1e-6 and dt < 30.0 and len(cases) == 3
    return ok, f"{len(cases)} cases, max rel err {worst:.2e}, {dt:.2f} s"


def criterion_4():
    p, r, m = _setup(0.5, 1.0)
    exact = log_det_exact(2.0, spectrum_nu(build_B(40, p))).logabs
    asym = det_asymptotic(2.0, 40, m, r.sigma).logabs
    d = abs(exact - asym)
    return d < 1e-5, f"|ln|D_exact| - ln|D_asym|| = {d:.2e}"


def criterion_5():
    p, r, m = _setup(0.5, 1.0)
    groups = merged_pairs(spectrum_nu(build_B(60, p)), r.sigma)[:4]
    worst = 0.0
    for j, grp in enumerate(groups):
        target = float(lambda_m(j, m.tau0, r.sigma))
        worst = max(worst, float(np.max(np.abs(grp - target))))
    return worst < 1e-4, f"max |nu - lambda_m| over 4 groups {worst:.2e}"


def criterion_6():
    res = []
    for j in (2, 3, 4):
        p, r, m = _setup(0.5, 2.0 - 10.0**-j)
        res.append(abs(entropy_series(m, r.sigma).value - entropy_critical_h(p).value))
    ok = res[0] > res[1] > res[2] and res[2] < 5e-3
    return ok, "residuals " + ", ".join(f"{x:.2e}" for x in res)


def criterion_7():
    ratios, res = [], []
    for gamma in (1e-1, 1e-2, 1e-3):
        p, r, m = _setup(gamma, 1.0)
        d = abs(entropy_series(m, r.sigma).value - entropy_xx_limit(p).value)
        res.append(d)
        ratios.append(d / (gamma * math.log(gamma) ** 2))
    ok = res[0] > res[1] > res[2] and max(ratios) < 1.0
    return ok, "residual / (gamma ln^2 gamma) = " + ", ".join(f"{x:.3f}" for x in ratios)


def criterion_8():
    worst_re, worst_ell, min_tau0 = 0.0, 0.0, math.inf
    for p in _grid():
        m = compute_moduli(classify(p), p)
        worst_re = max(worst_re, abs(m.tau.real))
        worst_ell = max(worst_ell, m.elliptic_agreement())
        min_tau0 = min(min_tau0, m.tau0)
    ok = worst_re < 1e-10 and min_tau0 > 0 and worst_ell < 1e-9
    return ok, f"max |Re tau| {worst_re:.1e}, min tau0 {min_tau0:.3f}, max elliptic gap {worst_ell:.1e}"


def criterion_9():
    k_err = max(abs(elliptic_K(k) - v) for k, v in K_ORACLE.items())
    rng = np.random.default_rng(20240611)
    theta_err = 0.0
    for _ in range(100):
        tau0 = rng.uniform(0.1, 3.0)
        tp = ThetaParams(tau0)
        s = complex(rng.uniform(-1, 1), rng.uniform(-1, 1) * tau0)
        t = theta3(s, tp)
        # scale = sum of |terms|, the natural size near a zero of theta3
        scale = math.exp(log_theta3_imag(s.imag, tp))
        factor = np.exp(-1j * np.pi * tp.tau - 2j * np.pi * s)
        n, j = rng.integers(-3, 4, size=2)
        zero = 0.5 + tp.tau / 2 + n + j * tp.tau
        errs = (
            abs(theta3(s + 1, tp) - t) / scale,
            abs(theta3(-s, tp) - t) / scale,
            abs(theta3(s + tp.tau, tp) - factor * t) / (abs(factor) * scale),
            abs(theta3(zero, tp)) / math.exp(log_theta3_imag(zero.imag, tp)),
        )
        theta_err = max(theta_err, *errs)
    ok = k_err < 1e-12 and theta_err < 1e-12
    return ok, f"elliptic_K max err {k_err:.1e}; theta3 max scaled err {theta_err:.1e} on 100 samples"


CRITERIA = [
    (1, "cross-method entropy agreement", criterion_1),
    (2, "finite-L convergence and decay rate", criterion_2),
    (3, "Fredholm identity", criterion_3),
    (4, "Toeplitz determinant asymptotics", criterion_4),
    (5, "pair merging", criterion_5),
    (6, "critical-field law", criterion_6),
    (7, "XX limit", criterion_7),
    (8, "moduli sanity", criterion_8),
    (9, "special functions", criterion_9),
]


def _line(num, name, ok, detail):
    return f"ACCEPTANCE {num} {'PASS' if ok else 'FAIL'} {name}: {detail}"


@pytest.mark.parametrize("num, name, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(num, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, name, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(_line(num, name, ok, detail))
    sys.exit(1 if failed else 0)
