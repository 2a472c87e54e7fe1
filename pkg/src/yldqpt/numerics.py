"""Dense complex linear algebra used by the physics modules.

All matrices are plain ``numpy.ndarray`` of dtype ``complex128``. Logarithms,
square roots and inverse trigonometric functions take the principal branch.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from .errors import BranchCutError, NumericalError, ParameterError, SingularMatrixError

MAX_EXPM_DIM = 4096
MAX_KRON_SITES = 12

IDENTITY2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def _square(m, what="matrix"):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError(f"{what} must be square, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class Pauli2x2Decomposition:
    """``c0 * I + cx * X + cy * Y + cz * Z``."""

    c0: complex
    cx: complex
    cy: complex
    cz: complex

    @property
    def vector(self):
        return np.array([self.cx, self.cy, self.cz], dtype=np.complex128)

    def matrix(self):
        return (self.c0 * IDENTITY2 + self.cx * SIGMA_X
                + self.cy * SIGMA_Y + self.cz * SIGMA_Z)

    def scale(self, factor):
        return Pauli2x2Decomposition(factor * self.c0, factor * self.cx,
                                     factor * self.cy, factor * self.cz)


def pauli_decompose(m):
    m = _square(m)
    if m.shape != (2, 2):
        raise ParameterError(f"expected a 2x2 matrix, got {m.shape}")
    return Pauli2x2Decomposition(
        c0=complex((m[0, 0] + m[1, 1]) / 2),
        cx=complex((m[0, 1] + m[1, 0]) / 2),
        cy=complex((m[1, 0] - m[0, 1]) / 2j),
        cz=complex((m[0, 0] - m[1, 1]) / 2),
    )


def eigvals_2x2(m):
    """Analytic eigenvalues ``c0 +/- sqrt(cx^2 + cy^2 + cz^2)`` of a 2x2 matrix."""
    d = pauli_decompose(m)
    s = np.sqrt(complex(np.sum(d.vector ** 2)))
    return np.array([d.c0 + s, d.c0 - s])


def expm(m):
    """Matrix exponential by scaling and squaring with a Pade approximant.

    Raises ``NumericalError`` when the result overflows.
    """
    m = _square(m)
    if m.shape[0] > MAX_EXPM_DIM:
        raise ParameterError(f"dimension {m.shape[0]} exceeds {MAX_EXPM_DIM}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("expm input has non-finite entries")
    with np.errstate(over="ignore", invalid="ignore"):
        out = scipy.linalg.expm(m)
    if not np.all(np.isfinite(out)):
        raise NumericalError("matrix exponential overflows double precision")
    return out


def _atanhc(x):
    # atanh(x) / x, even in x
    if abs(x) < 1e-4:
        x2 = x * x
        return 1 + x2 / 3 + x2 * x2 / 5
    return np.arctanh(x) / x


def logm_2x2(m, cut_tol=1e-13):
    """Principal matrix logarithm of an invertible 2x2 matrix, in the Pauli basis.

    With eigenvalues ``c0 +/- s`` the logarithm is
    ``(log l+ + log l-)/2 * I + (log l+ - log l-)/(2 s) * (m - c0 I)``, which
    also covers the defective case ``s = 0`` through the limit ``1 / c0``.

    Raises ``BranchCutError`` if an eigenvalue sits on the negative real axis
    (relative tolerance ``cut_tol``) and ``SingularMatrixError`` if one
    vanishes.
    """
    m = _square(m)
    d = pauli_decompose(m)
    c0 = d.c0
    s = np.sqrt(complex(np.sum(d.vector ** 2)))
    det = complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if det == 0 or not np.isfinite(det):
        raise SingularMatrixError("matrix logarithm of a singular matrix")
    # larger root directly, smaller one from the determinant
    if abs(c0 + s) >= abs(c0 - s):
        lp = c0 + s
        lm = det / lp
    else:
        lm = c0 - s
        lp = det / lm
    for lam in (lp, lm):
        if lam.real < 0 and abs(lam.imag) <= cut_tol * abs(lam):
            raise BranchCutError(
                f"eigenvalue {lam} lies on the branch cut of the principal log",
                eigenvalues=(lp, lm),
            )
    log_p, log_m = np.log(lp), np.log(lm)
    direct = log_p - log_m
    if abs(c0) > 0 and abs(s) < 0.5 * abs(c0):
        series = 2 * np.arctanh(s / c0)
        if abs(series - direct) < 1e-6 * (1 + abs(direct)):
            f = _atanhc(s / c0) / c0
        else:
            f = direct / (2 * s)
    else:
        f = direct / (2 * s)
    return Pauli2x2Decomposition(
        c0=complex((log_p + log_m) / 2),
        cx=complex(f * d.cx),
        cy=complex(f * d.cy),
        cz=complex(f * d.cz),
    )


def kron_chain(site_ops, positions, n_sites):
    """Tensor product acting as ``site_ops[k]`` on ``positions[k]`` and as identity elsewhere.

    Site 0 is the leftmost Kronecker factor.
    """
    n_sites = int(n_sites)
    if n_sites < 1:
        raise ParameterError("n_sites must be at least 1")
    if n_sites > MAX_KRON_SITES:
        raise ParameterError(f"n_sites={n_sites} exceeds {MAX_KRON_SITES} (dimension overflow)")
    if len(site_ops) != len(positions):
        raise ParameterError("site_ops and positions differ in length")
    factors = [IDENTITY2] * n_sites
    for op, pos in zip(site_ops, positions):
        op = _square(op, "site operator")
        if op.shape != (2, 2):
            raise ParameterError("site operators must be 2x2")
        if not 0 <= pos < n_sites:
            raise ParameterError(f"position {pos} outside [0, {n_sites})")
        factors[pos] = factors[pos] @ op
    return reduce(np.kron, factors)
