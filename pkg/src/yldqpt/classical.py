"""Classical Ising chains and lattices in a purely imaginary magnetic field.

Conventions: the physical field is ``i*h`` with ``h`` real, the Boltzmann
weight is ``exp(beta * sum(J s_l s_{l+1} + i h s_l))`` and all boundaries are
periodic, so a single spin (or a single row/column) couples to itself.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NoZerosError, ParameterError

MAX_BRUTE_SITES = 20
MAX_ROW_WIDTH = 10


@dataclass(frozen=True)
class ClassicalIsing1DParams:
    beta: float
    J: float
    h: float
    N: int

    def __post_init__(self):
        if not all(np.isfinite([self.beta, self.J, self.h])):
            raise ParameterError("beta, J and h must be finite")
        if self.beta <= 0:
            raise ParameterError(f"beta must be positive, got {self.beta}")
        if self.J <= 0:
            raise ParameterError(f"J must be positive, got {self.J}")
        if int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"N must be a positive integer, got {self.N}")


@dataclass(frozen=True)
class ClassicalIsing2DParams:
    """``N`` spins per row coupled by ``J1``; ``M`` rows coupled by ``J2``."""

    beta_cl: float
    J1: float
    J2: float
    h_cl: float
    N: int
    M: int

    def __post_init__(self):
        if not all(np.isfinite([self.beta_cl, self.J1, self.J2, self.h_cl])):
            raise ParameterError("beta_cl, J1, J2 and h_cl must be finite")
        if self.beta_cl <= 0:
            raise ParameterError(f"beta_cl must be positive, got {self.beta_cl}")
        for name in ("N", "M"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ParameterError(f"{name} must be a positive integer, got {v}")


@dataclass(frozen=True)
class YangLeeZeroSet:
    zeros: np.ndarray
    fugacity_points: np.ndarray
    h_c: float


def theta_from_coupling(beta, J):
    """Angle with ``tanh(theta) = exp(-2 beta J)``.

    Same as ``0.5 * ln[(1 + e^{-2 beta J}) / (1 - e^{-2 beta J})]``; it turns a
    ferromagnetic bond weight into a matrix element of ``exp(theta * sigma_x)``.
    """
    x = np.exp(-2.0 * beta * J)
    if not 0 < x < 1:
        raise ParameterError("beta * J must be positive and finite for a finite angle")
    return float(np.arctanh(x))


def bond_amplitude(theta):
    """``[sinh(2 theta) / 2]^(-1/2)``: the per-bond factor between weights and matrix elements."""
    return float((0.5 * np.sinh(2.0 * theta)) ** -0.5)


def transfer_matrix_1d(p):
    b, J, h = p.beta, p.J, p.h
    return np.array([
        [np.exp(b * J + 1j * b * h), np.exp(-b * J)],
        [np.exp(-b * J), np.exp(b * J - 1j * b * h)],
    ], dtype=np.complex128)


def transfer_eigenvalues_1d(p):
    """``e^{bJ} cos(bh) +/- sqrt(e^{-2bJ} - e^{2bJ} sin^2(bh))`` with a complex root."""
    b, J, h = p.beta, p.J, p.h
    root = np.sqrt(complex(np.exp(-2 * b * J) - np.exp(2 * b * J) * np.sin(b * h) ** 2))
    c = np.exp(b * J) * np.cos(b * h)
    return c + root, c - root


def partition_1d_closed(p):
    lp, lm = transfer_eigenvalues_1d(p)
    return complex(lp ** p.N + lm ** p.N)


def partition_1d_cosine(p):
    """Cosine form, valid only when ``e^{-4 beta J} <= sin^2(beta h)``."""
    b, J, h, N = p.beta, p.J, p.h, p.N
    if np.exp(-4 * b * J) - np.sin(b * h) ** 2 > 0:
        raise NoZerosError("cosine form requires |sin(beta h)| >= exp(-2 beta J)")
    r = np.sqrt(1 - np.exp(-4 * b * J))
    arg = np.clip(np.cos(b * h) / r, -1.0, 1.0)
    return complex(amplitude_prefactor_1d(p) * np.cos(N * np.arccos(arg)))


def partition_1d_transfer(p):
    return complex(np.trace(np.linalg.matrix_power(transfer_matrix_1d(p), p.N)))


def partition_1d_brute(p):
    if p.N > MAX_BRUTE_SITES:
        raise ParameterError(f"brute force limited to N <= {MAX_BRUTE_SITES}, got {p.N}")
    return complex(_kernels.partition_1d_brute(p.beta, p.J, p.h, p.N))


def amplitude_prefactor_1d(p):
    """``2 e^{N beta J} (1 - e^{-4 beta J})^{N/2}``, the natural scale of ``|Z|``."""
    b, J, N = p.beta, p.J, p.N
    return float(2 * np.exp(N * b * J) * (1 - np.exp(-4 * b * J)) ** (N / 2))


def critical_field_1d(beta, J):
    """Yang-Lee edge ``arcsin(e^{-2 beta J}) / beta``."""
    if beta <= 0 or J < 0:
        raise ParameterError("need beta > 0 and J >= 0")
    return float(np.arcsin(np.exp(-2.0 * beta * J)) / beta)


def yang_lee_zeros_1d(p):
    b, J, N = p.beta, p.J, p.N
    m = np.arange(N)
    zeros = np.arccos(np.sqrt(1 - np.exp(-4 * b * J)) * np.cos((m + 0.5) * np.pi / N)) / b
    zeros = np.sort(zeros)
    return YangLeeZeroSet(
        zeros=zeros,
        fugacity_points=np.exp(2j * b * zeros),
        h_c=critical_field_1d(b, J),
    )


def _zero_angle(p):
    b, J, h = p.beta, p.J, p.h
    arg = np.cos(b * h) / np.sqrt(1 - np.exp(-4 * b * J))
    if abs(arg) >= 1:
        raise NoZerosError(
            f"|h| = {abs(h)} is outside the zero band (h_c = {critical_field_1d(b, J)}): no zeros"
        )
    return float(np.arccos(arg))


def zero_period_1d(p):
    """Spacing in chain length ``N`` between consecutive zeros of ``Z`` at fixed field."""
    return np.pi / _zero_angle(p)


def vanishing_sizes_1d(p, count):
    """Real-valued chain lengths ``(m + 1/2) * T_cl`` at which ``Z`` vanishes, ``m < count``."""
    return (np.arange(count) + 0.5) * zero_period_1d(p)


# -- two dimensions -------------------------------------------------------------

def hamiltonian_2d_energy(config, p):
    """Energy of a spin assignment ``config[i, j]`` (shape ``(N, M)``), periodic both ways."""
    s = np.asarray(config)
    if s.shape != (p.N, p.M):
        raise ParameterError(f"config must have shape {(p.N, p.M)}, got {s.shape}")
    if not np.all(np.abs(s) == 1):
        raise ParameterError("spins must be +1 or -1")
    s = s.astype(np.float64)
    e1 = np.sum(s * np.roll(s, -1, axis=0))
    e2 = np.sum(s * np.roll(s, -1, axis=1))
    return complex(-p.J1 * e1 - p.J2 * e2 - 1j * p.h_cl * np.sum(s))


def partition_2d_brute(p):
    if p.N * p.M > MAX_BRUTE_SITES:
        raise ParameterError(f"brute force limited to N*M <= {MAX_BRUTE_SITES}")
    return complex(_kernels.partition_2d_brute(p.beta_cl, p.J1, p.J2, p.h_cl, p.N, p.M))


def row_transfer_2d(p):
    """Row-to-row operator ``exp(theta * sum X_i) @ D`` on the ``2^N`` row space.

    ``D = exp[beta (J1 sum Z_i Z_{i+1} + i h sum Z_i)]`` is diagonal and
    ``tanh(theta) = exp(-2 beta J2)``. Returns the operator and the total
    amplitude prefactor ``[sinh(2 theta)/2]^(-N M / 2)``.
    """
    if p.N > MAX_ROW_WIDTH:
        raise ParameterError(f"row width limited to N <= {MAX_ROW_WIDTH}")
    if p.J2 <= 0:
        raise ParameterError("row transfer needs J2 > 0")
    theta = theta_from_coupling(p.beta_cl, p.J2)
    one_site = np.array([[np.cosh(theta), np.sinh(theta)],
                         [np.sinh(theta), np.cosh(theta)]])
    flip = np.ones((1, 1))
    for _ in range(p.N):
        flip = np.kron(flip, one_site)
    bond, mag = _kernels.spin_diagonals(p.N)
    diag = np.exp(p.beta_cl * (p.J1 * bond + 1j * p.h_cl * mag))
    prefactor = bond_amplitude(theta) ** (p.N * p.M)
    return flip * diag[None, :], prefactor


def partition_2d_transfer(p):
    row, prefactor = row_transfer_2d(p)
    return complex(prefactor * np.trace(np.linalg.matrix_power(row, p.M)))
