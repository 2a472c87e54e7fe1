"""Self-check suite: oracle comparisons and invariants on small default grids.

Each check returns ``(ok, detail)``. ``run_all`` is what ``yldqpt verify``
executes; it is seeded and therefore deterministic.
"""

import numpy as np

from . import _kernels
from .analysis import PeriodSample, fit_period_model, scaling_exponent
from .chain import QuantumIsingChainParams, detect_dqpt, loschmidt_chain
from .classical import (
    ClassicalIsing1DParams,
    ClassicalIsing2DParams,
    amplitude_prefactor_1d,
    critical_field_1d,
    partition_1d_brute,
    partition_1d_closed,
    partition_1d_transfer,
    partition_2d_brute,
    partition_2d_transfer,
    theta_from_coupling,
    yang_lee_zeros_1d,
)
from .numerics import eigvals_2x2, expm
from .quantum_map import (
    bch_hamiltonian_exact,
    classify_regime,
    continuum_deviation,
    deviation_bound,
    h_apt,
    loschmidt_apt_series,
    trace_apt,
)

SEED = 20240601


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _random_1d(rng, max_n=12):
    beta = rng.uniform(0.05, 2.0)
    return ClassicalIsing1DParams(beta=beta, J=rng.uniform(0.1, 5.0),
                                  h=rng.uniform(0.0, np.pi / beta), N=int(rng.integers(1, max_n + 1)))


def check_partition_1d(draws=50):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(draws):
        p = _random_1d(rng)
        zc, zt, zb = partition_1d_closed(p), partition_1d_transfer(p), partition_1d_brute(p)
        worst = max(worst, _rel(zc, zt), _rel(zc, zb), _rel(zt, zb))
    return worst <= 1e-10, f"max pairwise rel err {worst:.3g}"


def check_yang_lee_zeros():
    rng = np.random.default_rng(SEED + 1)
    cases = [ClassicalIsing1DParams(0.1, 20.0, 0.0, 8)]
    cases += [_random_1d(rng) for _ in range(3)]
    worst = 0.0
    for p in cases:
        scale = amplitude_prefactor_1d(p)
        for h in yang_lee_zeros_1d(p).zeros:
            z = partition_1d_closed(ClassicalIsing1DParams(p.beta, p.J, h, p.N))
            worst = max(worst, abs(z) / scale)
    return worst <= 1e-8, f"max |Z|/prefactor at zeros {worst:.3g}"


def check_no_zeros_below_edge():
    p = ClassicalIsing1DParams(0.1, 20.0, 0.0, 8)
    hc = critical_field_1d(p.beta, p.J)
    hs = np.linspace(0.0, hc, 1000, endpoint=False)
    z = np.array([abs(partition_1d_closed(ClassicalIsing1DParams(p.beta, p.J, h, p.N))) for h in hs])
    ratio = float(np.min(z / amplitude_prefactor_1d(p)))
    return ratio > 1e-6, f"min |Z|/prefactor below h_c {ratio:.3g}"


def check_exact_map(draws=50):
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    done = 0
    while done < draws:
        p = _random_1d(rng)
        t = rng.uniform(0.5, 5.0)
        try:
            c = bch_hamiltonian_exact(p, t)
        except ArithmeticError:
            continue
        theta = theta_from_coupling(p.beta, p.J)
        amp = (0.5 * np.sinh(2 * theta)) ** (-p.N / 2)
        z = amp * np.trace(expm(-1j * t * c.matrix()))
        worst = max(worst, _rel(z, partition_1d_closed(p)))
        done += 1
    return worst <= 1e-9, f"max rel err {worst:.3g}"


def check_deviation_bound(points=10):
    worst = 0.0
    for n in (2, 5, 10):
        for beta in np.linspace(0.05, 1.0, points):
            for h in np.linspace(0.0, 1.0, points):
                p = ClassicalIsing1DParams(beta, 3.0, h, n)
                worst = max(worst, continuum_deviation(p) / deviation_bound(p))
    return worst <= 1.0, f"max deviation/bound {worst:.3g}"


def check_exceptional_point():
    h = h_apt(0.7, 0.7)
    ev = eigvals_2x2(h)
    gap = abs(ev[0] - ev[1])
    times = np.linspace(0.0, 20.0, 101)
    tr = np.array([np.trace(expm(-1j * t * h)) for t in times])
    err = float(np.max(np.abs(tr - 2)))
    ok = gap <= 1e-10 and err <= 1e-10 and np.allclose(trace_apt(0.7, 0.7, times), 2, atol=1e-10)
    return ok, f"eigenvalue gap {gap:.3g}, max |Tr - 2| {err:.3g}"


def check_bch_edge():
    beta, J, N, t = 0.5, 1.0, 6, 2.0
    hc = critical_field_1d(beta, J)
    c = bch_hamiltonian_exact(ClassicalIsing1DParams(beta, J, hc, N), t)
    disc = abs(classify_regime(c).discriminant)
    return disc <= 1e-10, f"|discriminant| at h_c {disc:.3g}"


def check_partition_2d():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for n, m in ((2, 2), (2, 3), (3, 3)):
        p = ClassicalIsing2DParams(rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.5),
                                   rng.uniform(0.1, 1.5), rng.uniform(0.0, 2.0), n, m)
        worst = max(worst, _rel(partition_2d_transfer(p), partition_2d_brute(p)))
    return worst <= 1e-8, f"max rel err {worst:.3g}"


def check_decoupling_2d():
    beta, J, h, n, m = 0.4, 0.8, 0.9, 3, 3
    z_col = partition_1d_closed(ClassicalIsing1DParams(beta, J, h, m)) ** n
    z_row = partition_1d_closed(ClassicalIsing1DParams(beta, J, h, n)) ** m
    e1 = _rel(partition_2d_brute(ClassicalIsing2DParams(beta, 0.0, J, h, n, m)), z_col)
    e2 = _rel(partition_2d_brute(ClassicalIsing2DParams(beta, J, 0.0, h, n, m)), z_row)
    return max(e1, e2) <= 1e-10, f"J1=0: {e1:.3g}, J2=0: {e2:.3g}"


def check_chain_basics():
    p = QuantumIsingChainParams(N=6, J=1.0, g=1.3, h=0.4)
    times = np.linspace(0.0, 3.0, 31)
    a = loschmidt_chain(p, times).values
    b = loschmidt_chain(p, times, method="expm").values
    err = float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0)))
    g0 = abs(a[0] - 1)
    # g = 0: diagonal generator, trace is a configuration sum
    q = QuantumIsingChainParams(N=6, J=1.0, g=0.0, h=0.4)
    bond, mag = _kernels.spin_diagonals(q.N)
    direct = np.exp(-1j * np.outer(times, 1j * q.J * bond - q.h * mag)).mean(axis=1)
    e0 = float(np.max(np.abs(loschmidt_chain(q, times).values - direct) / np.abs(direct)))
    ok = err <= 1e-9 and g0 <= 1e-14 and e0 <= 1e-12
    return ok, f"eig vs expm {err:.3g}, |G(0) - 1| {g0:.3g}, g=0 sum {e0:.3g}"


def check_dqpt_0d():
    times = np.linspace(0.0, 10.0, 2000)
    res = detect_dqpt(loschmidt_apt_series(1.0, 2.0, times))
    expect = (np.arange(res.critical_times.size) + 0.5) * np.pi / np.sqrt(3)
    err = float(np.max(np.abs(res.critical_times - expect))) if expect.size else np.inf
    none = detect_dqpt(loschmidt_apt_series(2.0, 1.0, times)).critical_times.size
    return err <= 1e-6 and expect.size == 6 and none == 0, f"max time err {err:.3g}"


def check_period_fit():
    hs = np.linspace(1.05, 3.0, 12)
    fit = fit_period_model([PeriodSample(h, np.pi / np.sqrt(h * h - 1), "closed-form-0D") for h in hs])
    tau = np.logspace(-6, -3, 10)
    slope = scaling_exponent([PeriodSample(1 + x, np.pi / np.sqrt(x * (2 + x))) for x in tau], 1.0)
    ok = abs(fit.alpha - np.pi) <= 1e-8 and abs(fit.h_c_fit - 1) <= 1e-8 and abs(slope + 0.5) <= 1e-3
    return ok, f"alpha {fit.alpha:.10g}, h_c {fit.h_c_fit:.10g}, slope {slope:.6g}"


def check_kernel_backends():
    if _kernels.NUMBA_KERNELS is None:
        return True, "numba unavailable; single backend"
    a, b = _kernels.NUMPY_KERNELS, _kernels.NUMBA_KERNELS
    e1 = _rel(a.partition_1d_brute(0.3, 1.2, 0.7, 9), b.partition_1d_brute(0.3, 1.2, 0.7, 9))
    e2 = _rel(a.partition_2d_brute(0.3, 1.2, 0.5, 0.7, 3, 3), b.partition_2d_brute(0.3, 1.2, 0.5, 0.7, 3, 3))
    mu = np.array([0.1 + 1j, -0.2 + 0.5j, 0.3j])
    times = np.linspace(0, 5, 50)
    e3 = float(np.max(np.abs(a.trace_exp_grid(mu, times, 0.1) - b.trace_exp_grid(mu, times, 0.1))))
    worst = max(e1, e2, e3)
    return worst <= 1e-12, f"max backend difference {worst:.3g}"


CHECKS = [
    ("partition-1d-oracles", check_partition_1d),
    ("yang-lee-zeros", check_yang_lee_zeros),
    ("no-zeros-below-edge", check_no_zeros_below_edge),
    ("exact-map-identity", check_exact_map),
    ("continuum-deviation-bound", check_deviation_bound),
    ("exceptional-point", check_exceptional_point),
    ("bch-discriminant-at-edge", check_bch_edge),
    ("partition-2d-oracles", check_partition_2d),
    ("decoupling-2d", check_decoupling_2d),
    ("chain-amplitude", check_chain_basics),
    ("dqpt-detection-0d", check_dqpt_0d),
    ("period-fit-0d", check_period_fit),
    ("kernel-backends", check_kernel_backends),
]


def run_all(names=None):
    """Run the selected checks (all by default) as ``[(name, ok, detail)]``."""
    out = []
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
