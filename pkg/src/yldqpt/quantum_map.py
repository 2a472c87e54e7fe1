"""Map a classical Ising chain onto the Loschmidt amplitude of a two-level system.

A chain of ``N`` spins is rewritten as ``Z = A^N Tr[P^N]`` with the single
slice propagator ``P = exp(theta X) exp(i beta h Z)``. Two quantum pictures
follow:

* continuum limit: ``P^N ~ exp(-i t H_APT)`` with the anti-PT symmetric
  ``H_APT = i h_x X - h_z Z``, ``h_x = N theta / t`` and ``h_z = N beta h / t``;
* exact: ``P^N = exp(-i t H_non)`` with ``H_non = (i N / t) log P``.
"""

from dataclasses import dataclass

import numpy as np

from .chain import LoschmidtSeries
from .classical import (
    ClassicalIsing1DParams,
    bond_amplitude,
    transfer_eigenvalues_1d,
    theta_from_coupling,
    zero_period_1d,
)
from .errors import NoZerosError, NumericalError, ParameterError
from .numerics import (
    IDENTITY2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    expm,
    logm_2x2,
)

REGIMES = ("oscillatory", "exceptional", "non-oscillatory")


@dataclass(frozen=True)
class MappedQuantum0D:
    A: float
    theta: float
    h_x: float
    h_z: float
    t: float
    N: int

    def hamiltonian(self):
        return h_apt(self.h_x, self.h_z)


@dataclass(frozen=True)
class BCHCoefficients:
    """Pauli coefficients of ``H_non``; ``order`` is None for the exact logarithm."""

    hx_p: complex
    hy_p: complex
    hz_p: complex
    order: int | None
    t: float
    N: int
    h0_p: complex = 0j

    @property
    def vector(self):
        return np.array([self.hx_p, self.hy_p, self.hz_p], dtype=np.complex128)

    def matrix(self):
        return (self.h0_p * IDENTITY2 + self.hx_p * SIGMA_X
                + self.hy_p * SIGMA_Y + self.hz_p * SIGMA_Z)


@dataclass(frozen=True)
class EPClassification:
    discriminant: complex
    regime: str
    period: float | None
    tolerance: float


def h_apt(h_x, h_z):
    """``i h_x X - h_z Z``; anti-commutes with PT for P = X, T = complex conjugation."""
    return 1j * h_x * SIGMA_X - h_z * SIGMA_Z


def map_params_continuum(p, t):
    if not t > 0:
        raise ParameterError(f"evolution time must be positive, got {t}")
    theta = theta_from_coupling(p.beta, p.J)
    return MappedQuantum0D(
        A=bond_amplitude(theta),
        theta=theta,
        h_x=p.N * theta / t,
        h_z=p.N * p.beta * p.h / t,
        t=float(t),
        N=p.N,
    )


def classical_from_quantum(h_x, h_z, t, N):
    """Chain whose continuum map at time ``t`` hits the targets ``h_x``, ``h_z``.

    Uses ``beta = t / N`` so that ``h = h_z`` and ``tanh(beta h_x) = e^{-2 beta J}``.
    """
    if h_x <= 0:
        raise ParameterError("h_x must be positive to define a finite coupling")
    beta = t / N
    J = -np.log(np.tanh(beta * h_x)) / (2 * beta)
    return ClassicalIsing1DParams(beta=beta, J=float(J), h=float(h_z), N=int(N))


def _amplitude_power(A, N):
    with np.errstate(over="ignore"):
        value = np.exp(N * np.log(A))
    if not np.isfinite(value):
        raise NumericalError(f"A^N overflows for A={A}, N={N}; use normalized=True")
    return float(value)


def trace_apt(h_x, h_z, times):
    """``Tr exp(-i t H_APT) = 2 cos(sqrt(h_z^2 - h_x^2) t)`` with a complex root."""
    omega = np.sqrt(complex(h_z ** 2 - h_x ** 2))
    return 2 * np.cos(omega * np.asarray(times, dtype=np.float64))


def loschmidt_apt(q, times=None, normalized=False):
    """``A^N Tr exp(-i t H_APT)`` at ``q.t`` (or at each of ``times``).

    ``normalized=True`` drops the ``A^N`` factor.
    """
    t = q.t if times is None else times
    value = trace_apt(q.h_x, q.h_z, t)
    if not normalized:
        value = value * _amplitude_power(q.A, q.N)
    return complex(value) if np.ndim(value) == 0 else value


def loschmidt_apt_series(h_x, h_z, times, amplitude=1.0):
    """Sampled ``amplitude * Tr exp(-i t H_APT)``, refinable off-grid."""
    times = np.asarray(times, dtype=np.float64)

    def evaluate(t):
        return complex(amplitude * trace_apt(h_x, h_z, t))

    return LoschmidtSeries(
        times=times,
        values=amplitude * trace_apt(h_x, h_z, times),
        normalization="trace" if amplitude == 1.0 else "A^N*trace",
        evaluator=evaluate,
    )


def dqpt_period_apt(h_x, h_z):
    """``pi / sqrt(h_z^2 - h_x^2)`` or ``None`` when ``|h_z| <= |h_x|``."""
    if abs(h_z) <= abs(h_x):
        return None
    return float(np.pi / np.sqrt(h_z ** 2 - h_x ** 2))


def critical_times_apt(h_x, h_z, count):
    period = dqpt_period_apt(h_x, h_z)
    if period is None:
        return np.empty(0)
    return (np.arange(count) + 0.5) * period


def deviation_bound(p):
    """Upper bound ``N (|theta| + |beta h|)^3 exp(N (|theta| + |beta h|))`` on ``|Tr E_N|``."""
    x = abs(theta_from_coupling(p.beta, p.J)) + abs(p.beta * p.h)
    return float(p.N * x ** 3 * np.exp(p.N * x))


def continuum_deviation(p, t=1.0):
    """Measured ``|A^{-N} Z - Tr exp(-i t H_APT)|`` with ``Z`` from the closed form."""
    q = map_params_continuum(p, t)
    # (lambda / A)^N term by term so that large N does not overflow
    lp, lm = transfer_eigenvalues_1d(p)
    z_scaled = (lp / q.A) ** p.N + (lm / q.A) ** p.N
    return float(abs(z_scaled - np.trace(expm(-1j * t * q.hamiltonian()))))


def slice_propagator(p):
    """``exp(theta X) exp(i beta h Z)`` in closed form."""
    theta = theta_from_coupling(p.beta, p.J)
    bh = p.beta * p.h
    left = np.cosh(theta) * IDENTITY2 + np.sinh(theta) * SIGMA_X
    right = np.cos(bh) * IDENTITY2 + 1j * np.sin(bh) * SIGMA_Z
    return left @ right


def loschmidt_product(p):
    """``A^N Tr[P^N]``: the exact mapped amplitude without any logarithm."""
    theta = theta_from_coupling(p.beta, p.J)
    power = np.linalg.matrix_power(slice_propagator(p), p.N)
    return complex(_amplitude_power(bond_amplitude(theta), p.N) * np.trace(power))


def bch_hamiltonian_exact(p, t):
    """``H_non = (i N / t) log P`` from the closed 2x2 logarithm.

    ``exp(-i t H_non) = exp(N log P) = P^N`` on any branch; the principal
    branch of ``log P`` keeps the rotation angle in ``[0, pi]`` so that
    ``sqrt(h'.h') = (N/t) arccos(cos(beta h) / cos(beta h_c))``. Raises
    ``BranchCutError`` when ``P`` has a negative real eigenvalue; the trace
    identity is then still available from ``loschmidt_product``.
    """
    if not t > 0:
        raise ParameterError(f"evolution time must be positive, got {t}")
    log_p = logm_2x2(slice_propagator(p))
    h = log_p.scale(1j * p.N / t)
    return BCHCoefficients(hx_p=h.cx, hy_p=h.cy, hz_p=h.cz, order=None,
                           t=float(t), N=p.N, h0_p=h.c0)


# Series of log P = Lx X + Ly Y + i Lz Z in theta and b = beta h, grouped by
# total degree: (theta power, b power, coefficient).
_LOG_SERIES = {
    "x": [
        [(1, 0, 1.0)],
        [(1, 2, -1 / 3)],
        [(1, 4, -1 / 45), (3, 2, 2 / 45)],
    ],
    "y": [
        [(1, 1, 1.0)],
        [(3, 3, 2 / 45)],
        [(3, 5, 2 / 315), (5, 3, -2 / 315)],
    ],
    "z": [
        [(0, 1, 1.0)],
        [(2, 1, 1 / 3)],
        [(2, 3, 2 / 45), (4, 1, -1 / 45)],
    ],
}


def _series_sum(groups, theta, b, order):
    return sum(c * theta ** i * b ** j for group in groups[:order] for i, j, c in group)


def bch_hamiltonian_series(p, t, order):
    """Truncated BCH coefficients keeping the first ``order`` nonzero terms of each.

    Order 1 gives ``h'_x = (iN/t) theta``, ``h'_y = (iN/t) theta beta h`` and
    ``h'_z = -(N/t) beta h``; order 2 adds ``-theta (beta h)^2 / 3``,
    ``2 theta^3 (beta h)^3 / 45`` and ``theta^2 beta h / 3``.
    """
    if order not in (1, 2, 3):
        raise ParameterError(f"series order must be 1, 2 or 3, got {order}")
    if not t > 0:
        raise ParameterError(f"evolution time must be positive, got {t}")
    theta = theta_from_coupling(p.beta, p.J)
    b = p.beta * p.h
    pref = p.N / t
    return BCHCoefficients(
        hx_p=1j * pref * _series_sum(_LOG_SERIES["x"], theta, b, order),
        hy_p=1j * pref * _series_sum(_LOG_SERIES["y"], theta, b, order),
        hz_p=-pref * _series_sum(_LOG_SERIES["z"], theta, b, order) + 0j,
        order=order,
        t=float(t),
        N=p.N,
    )


def classify_regime(c, rtol=1e-10):
    """Sign of ``h'_x^2 + h'_y^2 + h'_z^2`` decides whether the amplitude has zeros.

    Accepts ``BCHCoefficients`` or a ``MappedQuantum0D`` (then ``h_x`` maps to
    ``i h_x`` and ``h_z`` to ``-h_z`` so the discriminant is ``h_z^2 - h_x^2``).
    """
    if isinstance(c, MappedQuantum0D):
        vec = np.array([1j * c.h_x, 0, -c.h_z], dtype=np.complex128)
    else:
        vec = c.vector
    disc = complex(np.sum(vec ** 2))
    tol = rtol * max(1.0, float(np.sum(np.abs(vec) ** 2)))
    if abs(disc) <= tol:
        return EPClassification(disc, "exceptional", None, tol)
    if disc.real > tol and abs(disc.imag) <= tol:
        return EPClassification(disc, "oscillatory", float(np.pi / np.sqrt(disc.real)), tol)
    return EPClassification(disc, "non-oscillatory", None, tol)


def period_correspondence_error(p, t, exact=False):
    """``|N / T_cl - t / T_G|``; ``exact=True`` takes ``T_G`` from the exact BCH Hamiltonian."""
    t_cl = zero_period_1d(p)
    if exact:
        period = classify_regime(bch_hamiltonian_exact(p, t)).period
    else:
        q = map_params_continuum(p, t)
        period = dqpt_period_apt(q.h_x, q.h_z)
    if period is None:
        raise NoZerosError("mapped Hamiltonian is not in the oscillatory regime")
    return float(abs(p.N / t_cl - t / period))

