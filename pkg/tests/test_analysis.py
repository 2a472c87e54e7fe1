import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from yldqpt import analysis
from yldqpt.analysis import (
    PeriodSample,
    critical_field_scan,
    fit_period_model,
    map_critical_back_2d,
    scaling_exponent,
    worker_count,
)
from yldqpt.chain import QuantumIsingChainParams, map_params_2d
from yldqpt.classical import ClassicalIsing1DParams, ClassicalIsing2DParams, critical_field_1d, zero_period_1d
from yldqpt.errors import ConvergenceError, ParameterError


def law_samples(alpha, hc, hs, source="closed-form-0D"):
    return [PeriodSample(h, alpha / np.sqrt(h * h - hc * hc), source) for h in hs]


def test_fit_recovers_closed_form_law():
    fit = fit_period_model(law_samples(np.pi, 1.0, np.linspace(1.05, 3.0, 10)))
    assert fit.alpha == pytest.approx(np.pi, abs=1e-8)
    assert fit.h_c_fit == pytest.approx(1.0, abs=1e-8)
    assert fit.residual_norm <= 1e-10
    assert fit.converged and not fit.flagged


@given(st.floats(0.1, 10), st.floats(0.0, 2.0))
def test_fit_is_exact_on_model_data(alpha, hc):
    hs = hc + np.geomspace(0.05, 3.0, 8)
    fit = fit_period_model(law_samples(alpha, hc, hs))
    assert fit.residual_norm <= 1e-10
    assert fit.h_c_fit == pytest.approx(hc, abs=1e-7)


def test_fit_invariances(rng):
    base = law_samples(2.0, 0.5, np.linspace(0.6, 2.0, 9))
    fit = fit_period_model(base)
    shuffled = [base[i] for i in rng.permutation(len(base))]
    f2 = fit_period_model(shuffled)
    assert f2.h_c_fit == pytest.approx(fit.h_c_fit, abs=1e-8)
    scaled = fit_period_model([PeriodSample(s.h, 3.0 * s.T) for s in base])
    assert scaled.h_c_fit == pytest.approx(fit.h_c_fit, abs=1e-8)
    assert scaled.alpha == pytest.approx(3.0 * fit.alpha, rel=1e-8)


def test_fit_with_noise(rng):
    hs = np.linspace(1.05, 3.0, 20)
    samples = [PeriodSample(s.h, s.T * (1 + 0.01 * rng.standard_normal()))
               for s in law_samples(np.pi, 1.0, hs)]
    fit = fit_period_model(samples)
    assert fit.alpha == pytest.approx(np.pi, rel=0.03)
    assert fit.h_c_fit == pytest.approx(1.0, rel=0.03)


def test_fit_flags_inconsistent_data():
    samples = [PeriodSample(h, T) for h, T in zip([1, 2, 3, 4, 5], [1, 9, 1, 9, 1])]
    assert fit_period_model(samples).flagged


def test_fit_reports_best_iterate_on_cap(monkeypatch):
    monkeypatch.setattr(analysis, "MAX_ITER", 1)
    with pytest.raises(ConvergenceError) as info:
        fit_period_model(law_samples(np.pi, 1.0, np.linspace(1.05, 3.0, 10)))
    assert info.value.best is not None


def test_fit_validation():
    with pytest.raises(ParameterError):
        fit_period_model(law_samples(1.0, 0.0, [1, 2, 3]))
    with pytest.raises(ParameterError):
        fit_period_model(law_samples(1.0, 0.0, [1, 1, 2, 3]))
    with pytest.raises(ParameterError):
        PeriodSample(1.0, -1.0)


def test_scaling_exponent_exact_law():
    tau = np.geomspace(1e-9, 1e-6, 12)
    samples = [PeriodSample(1 + x, np.pi / np.sqrt((1 + x) ** 2 - 1)) for x in tau]
    assert scaling_exponent(samples, 1.0) == pytest.approx(-0.5, abs=1e-6)


def test_scaling_exponent_classical_chain():
    beta, J = 0.5, 1.0
    hc = critical_field_1d(beta, J)
    tau = np.geomspace(1e-5, 1e-3, 10)
    samples = [PeriodSample(hc + x, zero_period_1d(ClassicalIsing1DParams(beta, J, hc + x, 1)), "classical-1D")
               for x in tau]
    assert scaling_exponent(samples, hc) == pytest.approx(-0.5, abs=0.02)


def test_scaling_exponent_tends_to_half_near_edge():
    beta, J = 0.5, 1.0
    hc = critical_field_1d(beta, J)
    devs = []
    for top in (1e-1, 1e-2, 1e-3):
        tau = np.geomspace(top / 100, top, 8)
        samples = [PeriodSample(hc + x, zero_period_1d(ClassicalIsing1DParams(beta, J, hc + x, 1)))
                   for x in tau]
        devs.append(abs(scaling_exponent(samples, hc) + 0.5))
    assert devs[0] > devs[1] > devs[2]


def test_scaling_exponent_needs_decades():
    samples = law_samples(1.0, 1.0, [1.1, 1.2, 1.3])
    with pytest.raises(ParameterError):
        scaling_exponent(samples, 1.0)
    with pytest.raises(ParameterError):
        scaling_exponent(samples, 1.15)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("YLDQPT_THREADS", "3")
    assert worker_count() == 3
    assert worker_count(2) == 2
    monkeypatch.setenv("YLDQPT_THREADS", "0")
    assert worker_count() >= 1
    with pytest.raises(ParameterError):
        worker_count(-1)


def test_scan_small_g_and_missing_zeros():
    base = QuantumIsingChainParams(N=6, J=1.0)
    res = critical_field_scan([2.0, 0.1, 3.0], base, np.linspace(0.05, 0.5, 10), 40.0, points=1000)
    assert [g for g, _ in res] == [2.0, 0.1, 3.0]
    assert res[1][1] < 0.1 * res[0][1]
    assert res[2][1] == np.inf


def test_scan_refinement_is_monotone():
    base = QuantumIsingChainParams(N=6, J=1.0)
    coarse = critical_field_scan([2.0], base, np.linspace(0.1, 1.0, 10), 40.0, points=1000)[0][1]
    fine = critical_field_scan([2.0], base, np.linspace(0.1, 1.0, 19), 40.0, points=1000)[0][1]
    assert fine <= coarse + 0.1


def test_scan_threads_do_not_change_results():
    base = QuantumIsingChainParams(N=5, J=1.0)
    args = ([0.5, 1.5, 2.0], base, np.linspace(0.05, 0.6, 8), 30.0)
    assert critical_field_scan(*args, points=600, threads=1) == critical_field_scan(*args, points=600, threads=3)


def test_scan_validation():
    with pytest.raises(ParameterError):
        critical_field_scan([1.0], QuantumIsingChainParams(), [0.5, 0.2], 10.0)


def test_map_critical_back():
    t, M, J = 2.0, 10, 1.5
    cp = map_critical_back_2d(0.34, t, M, beta_cl=t / M, J=J)
    assert cp.h_cl_c == pytest.approx(0.34j)
    assert cp.J2_c == pytest.approx(-np.log(np.tanh(t * J / M)) / (2 * t / M))
    with pytest.raises(ParameterError):
        map_critical_back_2d(0.34, -1.0, M, 0.2, J)


def test_critical_coupling_flips_g():
    t, M, beta, J1 = 2.0, 10, 0.3, 1.0
    J = M * beta * J1 / t
    j2c = map_critical_back_2d(0.1, t, M, beta, J).J2_c
    g = [map_params_2d(ClassicalIsing2DParams(beta, J1, j2c * f, 0.1, 3, M), t).g for f in (0.9, 1.0, 1.1)]
    assert g[0] > 1 > g[2]
    assert g[1] == pytest.approx(1.0, rel=1e-12)
