"""Period-law fits, scaling exponents and critical-field scans."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .chain import DEFAULT_POINTS, detect_dqpt, loschmidt_chain
from .errors import ConvergenceError, ParameterError

SOURCES = ("closed-form-0D", "chain-N8", "classical-1D")
MAX_ITER = 200
STEP_RTOL = 1e-10
FLAG_RESIDUAL = 0.2
MIN_DECADES = 1.5


@dataclass(frozen=True)
class PeriodSample:
    h: float
    T: float
    source: str = "chain-N8"

    def __post_init__(self):
        if not (np.isfinite(self.h) and np.isfinite(self.T)) or self.T <= 0:
            raise ParameterError(f"need finite h and T > 0, got h={self.h}, T={self.T}")


@dataclass(frozen=True)
class PeriodFit:
    alpha: float
    h_c_fit: float
    residual_norm: float
    exponent: float
    iterations: int
    converged: bool = True
    flagged: bool = False


@dataclass(frozen=True)
class CriticalPoint2D:
    h_cl_c: complex
    J2_c: float


def worker_count(threads=None):
    """Thread cap from the argument or ``YLDQPT_THREADS`` (0 or unset means all cores)."""
    if threads is None:
        raw = os.environ.get("YLDQPT_THREADS", "").strip()
        threads = int(raw) if raw else 0
    if threads < 0:
        raise ParameterError("thread count must be non-negative")
    return threads or (os.cpu_count() or 1)


def _model(h, alpha, hc):
    return alpha / np.sqrt(h ** 2 - hc ** 2)


def _log_slope(x, y):
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)


def fit_period_model(samples):
    """Least-squares fit of ``T = alpha / sqrt(h^2 - h_c^2)`` with relative residuals.

    Damped Gauss-Newton from ``h_c = 0.99 min(h)`` and ``alpha`` matching the
    sample at the largest ``h``; a step is halved until the cost drops and
    the radicand stays positive. Raises ``ConvergenceError`` (with the best
    iterate) after ``MAX_ITER`` iterations.
    """
    if len(samples) < 4:
        raise ParameterError("need at least 4 samples")
    h = np.abs(np.array([s.h for s in samples], dtype=np.float64))
    T = np.array([s.T for s in samples], dtype=np.float64)
    if np.unique(h).size != h.size:
        raise ParameterError("sample fields must be distinct")

    def residuals(params):
        return 1.0 - _model(h, *params) / T

    def cost(params):
        if params[1] ** 2 >= h.min() ** 2:
            return np.inf
        r = residuals(params)
        return float(r @ r)

    hc = 0.99 * h.min()
    k = np.argmax(h)
    params = np.array([T[k] * np.sqrt(h[k] ** 2 - hc ** 2), hc])
    current = cost(params)
    converged = False
    it = 0
    for it in range(1, MAX_ITER + 1):
        alpha, hc = params
        rad = h ** 2 - hc ** 2
        jac = -np.column_stack([1 / np.sqrt(rad), alpha * hc / rad ** 1.5]) / T[:, None]
        step = np.linalg.lstsq(jac, -residuals(params), rcond=None)[0]
        lam = 1.0
        while lam > 1e-12:
            trial = params + lam * step
            trial_cost = cost(trial)
            if trial_cost <= current:
                break
            lam /= 2
        else:
            # no descent along the Gauss-Newton direction: at a minimum
            converged = True
            break
        moved = np.abs(lam * step)
        params, current = trial, trial_cost
        if np.all(moved <= STEP_RTOL * np.maximum(np.abs(params), 1e-300)):
            converged = True
            break
    alpha, hc = float(params[0]), float(abs(params[1]))
    rms = float(np.sqrt(np.mean(residuals(params) ** 2)))
    # local exponent from the half of the samples closest to h_c
    order = np.argsort(h)
    near = order[h[order] > hc][: max(2, (h.size + 1) // 2)]
    exponent = _log_slope(h[near] - hc, T[near]) if near.size >= 2 else float("nan")
    fit = PeriodFit(alpha=alpha, h_c_fit=hc, residual_norm=rms, exponent=exponent,
                    iterations=it, converged=converged, flagged=rms > FLAG_RESIDUAL)
    if not converged:
        raise ConvergenceError(f"period fit did not converge in {MAX_ITER} iterations", best=fit)
    return fit


def scaling_exponent(samples, h_c):
    """Slope of ``log T`` against ``log(h - h_c)``; needs at least 1.5 decades of ``h - h_c``."""
    tau = np.array([s.h for s in samples], dtype=np.float64) - h_c
    T = np.array([s.T for s in samples], dtype=np.float64)
    if tau.size < 2 or np.any(tau <= 0):
        raise ParameterError("need at least two samples, all with h > h_c")
    decades = np.log10(tau.max() / tau.min())
    if decades < MIN_DECADES:
        raise ParameterError(f"h - h_c spans {decades:.2f} decades, need {MIN_DECADES}")
    return _log_slope(tau, T)


def _window(time_window):
    if np.ndim(time_window) == 0:
        return 0.0, float(time_window)
    t0, t1 = time_window
    return float(t0), float(t1)


def count_zeros(p, time_window, points=DEFAULT_POINTS, eps_zero=1e-6):
    t0, t1 = _window(time_window)
    series = loschmidt_chain(p, np.linspace(t0, t1, points), rescale=True)
    return detect_dqpt(series, eps_zero).critical_times.size


def _scan_one(g, p_base, h_grid, time_window, points, rel_tol, eps_zero):
    p = replace(p_base, g=float(g))

    def has_zeros(h):
        return count_zeros(replace(p, h=float(h)), time_window, points, eps_zero) >= 2

    lo = 0.0
    for h in h_grid:
        if has_zeros(h):
            hi = float(h)
            break
        lo = float(h)
    else:
        return float(g), math.inf
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if has_zeros(mid):
            hi = mid
        else:
            lo = mid
    return float(g), hi


def critical_field_scan(g_values, p_base, h_grid, time_window, points=DEFAULT_POINTS,
                        rel_tol=1e-3, eps_zero=1e-6, threads=None):
    """Smallest field with at least two DQPTs in ``time_window``, for each ``g``.

    The first grid field with zeros is bisected against its predecessor (or
    0) to relative tolerance ``rel_tol``. ``inf`` marks a ``g`` whose zeros
    lie above the grid. Results are ordered like ``g_values``.
    """
    h_grid = np.asarray(h_grid, dtype=np.float64)
    if h_grid.size == 0 or np.any(np.diff(h_grid) <= 0):
        raise ParameterError("h_grid must be non-empty and strictly ascending")
    args = (p_base, h_grid, time_window, points, rel_tol, eps_zero)
    workers = min(worker_count(threads), len(g_values)) or 1
    if workers == 1:
        return [_scan_one(g, *args) for g in g_values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda g: _scan_one(g, *args), g_values))


def chain_period_samples(p_base, h_values, t_max=60.0, min_zeros=6, points=DEFAULT_POINTS,
                         samples_per_period=40, max_window=1e4, eps_zero=1e-6):
    """Measured chain periods, widening the window until ``min_zeros`` DQPTs fit.

    The grid is densified so each period holds at least ``samples_per_period``
    samples. Fields without zeros below ``max_window`` are skipped.
    """
    out = []
    for h in h_values:
        p = replace(p_base, h=float(h))
        window, n_points = float(t_max), int(points)
        while True:
            series = loschmidt_chain(p, np.linspace(0.0, window, n_points), rescale=True)
            res = detect_dqpt(series, eps_zero)
            period = res.period_estimate
            if res.critical_times.size >= min_zeros:
                needed = int(np.ceil(samples_per_period * window / period)) + 1
                if needed <= n_points:
                    out.append(PeriodSample(h=float(h), T=period, source=f"chain-N{p.N}"))
                    break
                n_points = needed
                continue
            if window >= max_window:
                break
            window *= 2
            n_points = max(n_points, int(points))
    return out


def map_critical_back_2d(h_c_quantum, t, M, beta_cl, J):
    """Classical critical field and the ``J2`` where the mapped ``g`` crosses 1.

    Inverts ``h = (M/t) beta_cl h_cl``; the returned field is the physical
    imaginary field ``i h_cl``. ``J2_c = -ln tanh((t/M) J) / (2 beta_cl)``.
    """
    if t <= 0 or M < 1 or beta_cl <= 0 or J <= 0:
        raise ParameterError("need t > 0, M >= 1, beta_cl > 0, J > 0")
    h_cl = t * h_c_quantum / (M * beta_cl)
    j2c = -np.log(np.tanh(t * J / M)) / (2 * beta_cl)
    return CriticalPoint2D(h_cl_c=1j * h_cl, J2_c=float(j2c))
