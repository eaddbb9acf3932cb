import math

import numpy as np
import pytest

import xy_entropy.model as model
from xy_entropy.errors import DomainError, SingularityError
from xy_entropy.fredholm import KernelSpec, fredholm_det, kernel_K, nystrom_matrix
from xy_entropy.model import ModelParams, generator_Phi
from xy_entropy.spectrum import build_B, det_exact, spectrum_nu

P = ModelParams(0.5, 1.0)


def _exact(lam, L, params=P):
    return det_exact(lam, spectrum_nu(build_B(L, params)))


def test_kernel_off_diagonal_hand_expansion():
    # f = (z^L I, I), h = (z'^-L (I - Phi), -(I - Phi)) / (2 pi i), K = f^T h / (z - z')
    z, zp, L, lam = 1.0, 1j, 2, 2.0
    phi = (1 + 1j) / math.sqrt(2)  # phi(i) at (0.5, 1.0)
    jump = np.array([[1 - 2j, -phi], [1 / phi, 1 - 2j]])
    f1, f2 = z**L, 1.0
    h1 = zp ** (-L) * jump / (2j * math.pi)
    h2 = -jump / (2j * math.pi)
    expected = (f1 * h1 + f2 * h2) / (z - zp)
    spec = KernelSpec(L, lam, P, 64)
    np.testing.assert_allclose(kernel_K(z, zp, spec), expected, atol=1e-15)


def test_kernel_diagonal_limit():
    spec = KernelSpec(3, 2.0 + 0.5j, P, 64)
    z = np.exp(0.7j)
    diag = kernel_K(z, z, spec)
    expected = 3 * (np.eye(2) - generator_Phi(z, spec.lam, P)) / (2j * math.pi * z)
    np.testing.assert_allclose(diag, expected, atol=1e-15)
    near = kernel_K(z, z * np.exp(1e-7j), spec)
    np.testing.assert_allclose(near, diag, atol=1e-6)


def test_kernel_zero_length():
    spec = KernelSpec(0, 2.0, P, 16)
    assert np.all(kernel_K(1.0, 1j, spec) == 0)
    assert fredholm_det(spec) == 1.0


def test_kernel_off_circle():
    with pytest.raises(DomainError):
        kernel_K(1.1, 1j, KernelSpec(1, 2.0, P, 16))


def test_kernel_spec_validation():
    with pytest.raises(DomainError):
        KernelSpec(2, 2.0, P, 31)
    with pytest.raises(DomainError):
        KernelSpec(4, 2.0, P, 32)
    with pytest.raises(DomainError):
        KernelSpec(-1, 2.0, P, 32)


def test_nystrom_matches_kernel():
    spec = KernelSpec(2, 2.0, P, 32)
    M = nystrom_matrix(spec)
    z = np.exp(2j * np.pi * np.arange(32) / 32)
    w = 2j * np.pi * z / 32
    for j, k in [(0, 0), (3, 7), (31, 2)]:
        np.testing.assert_allclose(M[2 * j : 2 * j + 2, 2 * k : 2 * k + 2], kernel_K(z[j], z[k], spec) * w[k], atol=1e-14)


def test_fredholm_examples():
    assert abs(fredholm_det(KernelSpec(1, 2.0, P, 256)) - _exact(2.0, 1)) < 1e-8 * abs(_exact(2.0, 1))
    assert abs(fredholm_det(KernelSpec(6, 2.0, P, 512)) - _exact(2.0, 6)) < 1e-6 * abs(_exact(2.0, 6))
    assert abs(fredholm_det(KernelSpec(4, 2.0, P, 512)) - _exact(2.0, 4)) < 1e-6 * abs(_exact(2.0, 4))


def _errors(params, L, Ns, lam=2.0):
    ex = _exact(lam, L, params)
    return [abs(fredholm_det(KernelSpec(L, lam, params, N)) / ex - 1) for N in Ns]


def test_refinement_geometric():
    floor = 1e-13
    for params, L, Ns in [(P, 6, (128, 256, 512)), (ModelParams(0.5, 1.9), 1, (16, 32, 64, 128))]:
        errs = _errors(params, L, Ns)
        for a, b in zip(errs, errs[1:]):
            assert b <= max(a / 2, floor)
    # near criticality the decay is visible before the floor
    errs = _errors(ModelParams(0.5, 1.9), 1, (16, 32, 64))
    assert errs[0] > errs[1] > errs[2]


def test_converged_in_N():
    L = 2
    N = 16 * L * 8
    a = fredholm_det(KernelSpec(L, 1 + 2j, P, N))
    b = fredholm_det(KernelSpec(L, 1 + 2j, P, 2 * N))
    assert abs(a - b) < 1e-8


@pytest.mark.parametrize("params", [ModelParams(0.5, 1.0), ModelParams(0.5, 1.9), ModelParams(0.5, 3.0)])
@pytest.mark.parametrize("lam", [2.0, 3.0, 2j, 1 + 2j])
def test_identity_across_lambda(params, lam):
    for L in (1, 3, 6):
        ex = _exact(lam, L, params)
        fd = fredholm_det(KernelSpec(L, lam, params, 512))
        assert abs(fd - ex) < 1e-6 * abs(ex)


def test_phi_sign_does_not_change_det(monkeypatch):
    lam, L = 1 + 2j, 3
    before = fredholm_det(KernelSpec(L, lam, P, 256))
    monkeypatch.setattr(model, "phi_on_circle", lambda theta, params: model.symbol_g(theta, params))
    after = fredholm_det(KernelSpec(L, lam, P, 256))
    assert abs(after - before) < 1e-12 * abs(before)


@pytest.mark.parametrize("lam", [0.5, -1.0, 1.0, 0.0])
def test_singular_lambda(lam):
    with pytest.raises(SingularityError):
        fredholm_det(KernelSpec(2, lam, P, 64))
