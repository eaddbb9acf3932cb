import math

import numpy as np
import pytest

from xy_entropy.errors import ConvergenceError, DomainError, SmallTauError
from xy_entropy.special import (
    ThetaParams,
    _scaled_sum,
    agm_iterations,
    elliptic_K,
    log_theta3,
    log_theta3_imag,
    log_theta3_imag_cumulants,
    log_theta_ratio,
    theta3,
)

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

# sum_n q^{n^2} e^{2 pi i s n}, q = e^{-0.8 pi}, summed in 30-digit arithmetic
THETA_ORACLE_08 = [
    (0.3, 0.94986798513848476643),
    (0.1 + 0.25j, 1.3291737755842406759 - 0.22008522531479726469j),
    (-0.7 + 1.3j, -515.17294351580608228 + 46.928480347134119596j),
    (0.45 - 2.2j, -53883668.303604033259 + 95198162.266715358425j),
]


def test_elliptic_K_examples():
    assert elliptic_K(0.0) == pytest.approx(math.pi / 2, abs=1e-16)
    assert elliptic_K(1 / math.sqrt(2)) == pytest.approx(1.8540746773013719184, abs=1e-15)


@pytest.mark.parametrize("k", sorted(K_ORACLE))
def test_elliptic_K_oracle(k):
    assert abs(elliptic_K(k) - K_ORACLE[k]) < 1e-12


def test_elliptic_K_complementary_argument():
    # supplying k' directly keeps accuracy near k = 1
    kp = 1e-9
    k = math.sqrt(1 - kp * kp)
    expected = math.log(4 / kp)  # leading asymptotics, error O(kp^2 ln kp)
    assert elliptic_K(k, kp) == pytest.approx(expected, abs=1e-12)


def test_elliptic_K_domain():
    with pytest.raises(DomainError):
        elliptic_K(1.0)
    with pytest.raises(DomainError):
        elliptic_K(1.5)


def test_agm_iteration_count():
    for k in (0.1, 0.5, 0.9, 0.99, 0.9999, 0.999999):
        assert agm_iterations(k) <= 12


def test_legendre_sanity():
    for k in np.linspace(0.01, 0.99, 25):
        kp = math.sqrt(1 - k * k)
        a, b = elliptic_K(k), elliptic_K(kp)
        assert math.isfinite(a) and math.isfinite(b) and a > 0 and b > 0


def test_theta_params():
    tp = ThetaParams(0.8)
    assert tp.q == pytest.approx(math.exp(-0.8 * math.pi))
    assert tp.tau == 0.8j
    with pytest.raises(SmallTauError):
        ThetaParams(0.01)
    with pytest.raises(DomainError):
        ThetaParams(-1.0)
    with pytest.raises(ConvergenceError):
        ThetaParams(1e-9, tau0_min=0.0).half_width


@pytest.mark.parametrize("s, expected", THETA_ORACLE_08)
def test_theta3_oracle(s, expected):
    tp = ThetaParams(0.8)
    assert abs(theta3(s, tp) - expected) < 1e-13 * abs(expected)


def test_theta3_small_tau_oracle():
    tp = ThetaParams(0.05)
    expected = 0.35308525532621961032 - 0.090656885057069649704j
    assert abs(theta3(0.2 + 0.01j, tp) - expected) < 1e-13


def test_theta3_refuses_large_imag():
    tp = ThetaParams(0.5)
    with pytest.raises(DomainError):
        theta3(1j * 30.0, tp)
    assert np.isfinite(log_theta3(1j * 30.0, tp))


def test_theta3_truncation():
    tp = ThetaParams(0.3)
    m = tp.half_width
    # the first omitted term is below 1e-16 of the largest kept one
    assert math.exp(-math.pi * tp.tau0 * (m - 0.5) ** 2) < 1e-16
    s = 0.37 + 0.61j
    _, total = _scaled_sum(s, tp)
    n0 = -s.imag / tp.tau0
    n = np.arange(round(n0) - 4 * m, round(n0) + 4 * m + 1)
    wide = np.exp(-math.pi * tp.tau0 * (n - n0) ** 2 + 2j * math.pi * s.real * n).sum()
    assert abs(total - wide) < 1e-16 * abs(wide) * 10


def _samples(n=100, seed=11):
    rng = np.random.default_rng(seed)
    return rng.uniform(-1, 1, n) + 1j * rng.uniform(-1.5, 1.5, n)


@pytest.mark.parametrize("tau0", [0.3, 0.8, 2.0])
def test_theta3_periodic_and_even(tau0):
    tp = ThetaParams(tau0)
    s = _samples() * tau0
    t = theta3(s, tp)
    scale = np.abs(t) + 1.0
    assert np.all(np.abs(theta3(s + 1, tp) - t) < 1e-12 * scale)
    assert np.all(np.abs(theta3(-s, tp) - t) < 1e-12 * scale)


@pytest.mark.parametrize("tau0", [0.3, 0.8, 2.0])
def test_theta3_quasi_periodic(tau0):
    tp = ThetaParams(tau0)
    tau = tp.tau
    s = _samples() * tau0
    lhs = theta3(s + tau, tp)
    rhs = np.exp(-1j * np.pi * tau - 2j * np.pi * s) * theta3(s, tp)
    assert np.all(np.abs(lhs - rhs) < 1e-12 * np.abs(rhs))


@pytest.mark.parametrize("tau0", [0.1, 0.8, 2.0])
def test_theta3_zeros(tau0):
    tp = ThetaParams(tau0)
    for n, m in [(0, 0), (1, 0), (-2, 1), (3, -1)]:
        s = 0.5 + tp.tau / 2 + n + m * tp.tau
        assert abs(theta3(s, tp)) < 1e-12 * abs(theta3(s - 0.5, tp))


def test_log_theta3_imag_matches_complex():
    tp = ThetaParams(0.7)
    y = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(log_theta3_imag(y, tp), log_theta3(1j * y, tp).real, atol=1e-13)


def test_cumulants_match_finite_differences():
    tp = ThetaParams(0.9)
    a, h = 0.45, 1e-3
    k2, _ = log_theta3_imag_cumulants(a, tp)
    f = lambda y: log_theta3_imag(y, tp)
    fd = (f(a + h) - 2 * f(a) + f(a - h)) / h**2
    assert k2 == pytest.approx(fd, rel=1e-5)


@pytest.mark.parametrize("sigma", [0, 1])
def test_log_theta_ratio_at_zero(sigma):
    assert log_theta_ratio(0.0, sigma, ThetaParams(0.8)) == 0.0


@pytest.mark.parametrize("sigma", [0, 1])
def test_log_theta_ratio_is_real(sigma):
    tp = ThetaParams(0.8)
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 4, 30)
    shift = 0.5 * sigma * tp.tau
    full = log_theta3(1j * x + shift, tp) + log_theta3(1j * x - shift, tp) - 2 * log_theta3(shift + 0j, tp)
    # principal logs may differ by 2 pi i; the product itself is real and positive
    assert np.all(np.abs(np.sin(full.imag)) < 1e-12)
    assert np.all(np.cos(full.imag) > 0)
    np.testing.assert_allclose(log_theta_ratio(x, sigma, tp), full.real, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("sigma", [0, 1])
def test_log_theta_ratio_branches_agree(sigma):
    tp = ThetaParams(0.6)
    x = np.array([0.2, 0.25, 0.3])
    lo = log_theta_ratio(x, sigma, tp, x_switch=1.0)
    hi = log_theta_ratio(x, sigma, tp, x_switch=0.0)
    np.testing.assert_allclose(lo, hi, rtol=1e-12)


def test_log_theta_ratio_large_x_decay():
    tp = ThetaParams(0.8)
    for x in (5.0, 10.0):
        val = log_theta_ratio(x, 1, tp) / math.sinh(math.pi * x) ** 2
        assert 0 < val < 1e-10
    with pytest.raises(DomainError):
        log_theta_ratio(-1.0, 1, tp)
