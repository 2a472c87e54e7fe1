import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from yldqpt import _kernels
from yldqpt.chain import (
    LoschmidtSeries,
    QuantumIsingChainParams,
    build_h1,
    detect_dqpt,
    loschmidt_chain,
    map_params_2d,
    measure_period,
)
from yldqpt.classical import ClassicalIsing2DParams, row_transfer_2d, theta_from_coupling
from yldqpt.errors import ParameterError
from yldqpt.numerics import SIGMA_X, SIGMA_Z, expm, kron_chain
from yldqpt.quantum_map import loschmidt_apt_series


def h1_from_paulis(p):
    n, dim = p.N, 1 << p.N
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(n):
        if n > 1:
            h += 1j * p.J * kron_chain([SIGMA_Z, SIGMA_Z], [i, (i + 1) % n], n)
        else:
            h += 1j * p.J * np.eye(2)
        h += 1j * p.J * p.g * kron_chain([SIGMA_X], [i], n)
        h -= p.h * kron_chain([SIGMA_Z], [i], n)
    return h


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_build_h1_matches_pauli_sum(n):
    p = QuantumIsingChainParams(N=n, J=0.7, g=1.3, h=0.4)
    np.testing.assert_allclose(build_h1(p), h1_from_paulis(p), atol=1e-14)


def test_normalized_at_zero_time():
    s = loschmidt_chain(QuantumIsingChainParams(N=8, g=2.0, h=0.4), np.array([0.0, 1.0]))
    assert s.values[0] == 1.0


def test_eig_matches_expm():
    p = QuantumIsingChainParams(N=5, J=1.0, g=0.9, h=0.3)
    times = np.linspace(0, 4, 21)
    a = loschmidt_chain(p, times).values
    b = loschmidt_chain(p, times, method="expm").values
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-12)


def test_rescale_keeps_ratio():
    p = QuantumIsingChainParams(N=4, J=1.0, g=2.0, h=0.5)
    times = np.linspace(0, 30, 61)
    raw = loschmidt_chain(p, times)
    res = loschmidt_chain(p, times, rescale=True)
    assert res.rate > 0
    np.testing.assert_allclose(res.values, raw.values * np.exp(-res.rate * times), rtol=1e-9, atol=1e-15)
    assert np.abs(res.values).max() <= 1.0 + 1e-12


def test_zero_transverse_field_is_a_configuration_sum():
    p = QuantumIsingChainParams(N=6, J=1.0, g=0.0, h=0.7)
    times = np.linspace(0, 3, 13)
    bond, mag = _kernels.spin_diagonals(6)
    direct = np.exp(np.outer(times, p.J * bond + 1j * p.h * mag)).mean(axis=1)
    np.testing.assert_allclose(loschmidt_chain(p, times).values, direct, rtol=1e-12)


@given(st.floats(0.1, 3), st.floats(-1, 1), st.integers(2, 6))
def test_amplitude_is_real(g, h, n):
    # PT symmetry makes G'(t) real for real t
    s = loschmidt_chain(QuantumIsingChainParams(N=n, J=1.0, g=g, h=h), np.linspace(0, 5, 11), rescale=True)
    assert np.abs(s.values.imag).max() <= 1e-10


def test_loschmidt_validation():
    p = QuantumIsingChainParams()
    with pytest.raises(ParameterError):
        loschmidt_chain(p, np.array([0.0, 1.0, 0.5]))
    with pytest.raises(ParameterError):
        loschmidt_chain(p, np.array([]))
    with pytest.raises(ParameterError):
        loschmidt_chain(p, np.array([0.0, 1.0]), method="taylor")


@pytest.mark.parametrize("bad", [dict(N=0), dict(N=11), dict(J=0.0), dict(g=-1.0), dict(h=np.inf)])
def test_param_validation(bad):
    with pytest.raises(ParameterError):
        QuantumIsingChainParams(**bad)


def test_map_params_2d():
    lat = ClassicalIsing2DParams(beta_cl=0.1, J1=1.0, J2=2.0, h_cl=0.5, N=4, M=20)
    q = map_params_2d(lat, 2.0)
    assert q.J == pytest.approx(20 * 0.1 * 1.0 / 2.0)
    assert q.J * q.g == pytest.approx(20 * theta_from_coupling(0.1, 2.0) / 2.0)
    assert q.h == pytest.approx(20 * 0.1 * 0.5 / 2.0)


def test_map_params_2d_strong_row_coupling_kills_g():
    q = map_params_2d(ClassicalIsing2DParams(1.0, 1.0, 30.0, 0.2, 3, 4), 1.0)
    assert q.g < 1e-20


def test_slice_product_converges_to_evolution():
    # fixed chain couplings, more and thinner slices
    n, t, J, g, h = 3, 1.0, 0.8, 1.2, 0.5
    exact = np.trace(expm(-1j * t * build_h1(QuantumIsingChainParams(N=n, J=J, g=g, h=h))))
    errs = []
    for m in (8, 16, 32, 64):
        beta = t / m
        j2 = -np.log(np.tanh(beta * J * g)) / (2 * beta)
        row, _ = row_transfer_2d(ClassicalIsing2DParams(beta, J, j2, h, n, m))
        errs.append(abs(np.trace(np.linalg.matrix_power(row, m)) - exact) / abs(exact))
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


# -- zero detection -----------------------------------------------------------------

def test_detect_closed_form_zeros():
    res = detect_dqpt(loschmidt_apt_series(1.0, 2.0, np.linspace(0, 20, 2000)))
    expect = (np.arange(res.critical_times.size) + 0.5) * np.pi / np.sqrt(3)
    assert res.critical_times.size == 11
    np.testing.assert_allclose(res.critical_times, expect, atol=1e-6)
    assert res.period_estimate == pytest.approx(np.pi / np.sqrt(3), abs=1e-6)


def test_no_zeros_without_oscillation():
    res = detect_dqpt(loschmidt_apt_series(2.0, 1.0, np.linspace(0, 20, 2000)))
    assert res.critical_times.size == 0
    assert res.period_estimate is None


def test_spline_refinement_recovers_period():
    omega = 1.7
    t = np.linspace(0, 15, 2000)
    res = detect_dqpt(LoschmidtSeries(t, np.cos(omega * t)))
    assert res.period_estimate == pytest.approx(np.pi / omega, abs=1e-6)


def test_shallow_minimum_is_rejected():
    t = np.linspace(0, 10, 500)
    res = detect_dqpt(LoschmidtSeries(t, 1.5 + np.cos(2 * t)))
    assert res.critical_times.size == 0


def test_grid_stability():
    p = QuantumIsingChainParams(N=8, g=2.0, h=0.4)
    span = 30.0
    coarse = detect_dqpt(loschmidt_chain(p, np.linspace(0, span, 1000), rescale=True)).critical_times
    fine = detect_dqpt(loschmidt_chain(p, np.linspace(0, span, 1999), rescale=True)).critical_times
    assert coarse.size == fine.size > 2
    assert np.abs(coarse - fine).max() < 1e-6 * span


def test_detect_validation():
    with pytest.raises(ParameterError):
        detect_dqpt(LoschmidtSeries(np.array([]), np.array([])))
    with pytest.raises(ParameterError):
        detect_dqpt(LoschmidtSeries(np.array([0.0, 2.0, 1.0, 3.0]), np.ones(4)))


def test_chain_zeros_exist_only_above_edge_at_g2():
    p_below = QuantumIsingChainParams(N=8, g=2.0, h=0.30)
    p_above = QuantumIsingChainParams(N=8, g=2.0, h=0.40)
    assert measure_period(p_below, 60.0) is None
    assert measure_period(p_above, 60.0) == pytest.approx(4.52, abs=0.01)


def test_overflow_without_rescale():
    from yldqpt.errors import NumericalError

    with pytest.raises(NumericalError):
        loschmidt_chain(QuantumIsingChainParams(N=8, g=2.0, h=0.4), np.linspace(0, 400, 50))
