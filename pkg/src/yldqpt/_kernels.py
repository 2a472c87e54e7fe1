"""Hot inner loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports cleanly and the environment
variable ``YLDQPT_DISABLE_NUMBA`` is unset or ``0``. Both paths are always
importable as ``NUMPY_KERNELS`` / ``NUMBA_KERNELS`` so tests and the
benchmark can compare them directly.

Basis convention for every kernel: configuration index ``c`` holds the spin
of site ``i`` (0-based) in bit ``n - 1 - i``, bit 0 meaning spin +1. This is
the ordering produced by ``np.kron`` with site 0 as the leftmost factor.
"""

import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _flag(name):
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = numba is not None and not _flag("YLDQPT_DISABLE_NUMBA")


# -- pure numpy ---------------------------------------------------------------

_CHUNK = 1 << 15


def _spins_np(n, index):
    bits = (index[:, None] >> (n - 1 - np.arange(n))) & 1
    return (1 - 2 * bits).astype(np.int8)


def _chunks(size):
    for start in range(0, size, _CHUNK):
        yield np.arange(start, min(start + _CHUNK, size), dtype=np.int64)


def spin_diagonals_np(n):
    bond = np.empty(1 << n)
    mag = np.empty(1 << n)
    for index in _chunks(1 << n):
        s = _spins_np(n, index).astype(np.int64)
        bond[index] = np.sum(s * np.roll(s, -1, axis=1), axis=1)
        mag[index] = np.sum(s, axis=1)
    return bond, mag


def partition_1d_brute_np(beta, J, h, n):
    shift = beta * abs(J) * n
    acc = 0j
    for index in _chunks(1 << n):
        s = _spins_np(n, index).astype(np.int64)
        bond = np.sum(s * np.roll(s, -1, axis=1), axis=1)
        mag = np.sum(s, axis=1)
        acc += np.sum(np.exp(beta * J * bond - shift + 1j * beta * h * mag))
    return complex(acc) * np.exp(shift)


def partition_2d_brute_np(beta, J1, J2, h, n, m):
    sites = n * m
    shift = beta * (abs(J1) + abs(J2)) * sites
    acc = 0j
    for index in _chunks(1 << sites):
        # site (i, j) -> flat k = j * n + i
        s = _spins_np(sites, index).astype(np.int64).reshape(-1, m, n)
        b1 = np.sum(s * np.roll(s, -1, axis=2), axis=(1, 2))
        b2 = np.sum(s * np.roll(s, -1, axis=1), axis=(1, 2))
        mag = np.sum(s, axis=(1, 2))
        acc += np.sum(np.exp(beta * (J1 * b1 + J2 * b2) - shift + 1j * beta * h * mag))
    return complex(acc) * np.exp(shift)


def trace_exp_grid_np(mu, times, rate):
    out = np.empty(times.shape[0], dtype=np.complex128)
    for start in range(0, times.shape[0], 256):
        t = times[start:start + 256]
        out[start:start + 256] = np.exp(np.outer(t, mu) - rate * t[:, None]).sum(axis=1)
    return out


NUMPY_KERNELS = SimpleNamespace(
    name="numpy",
    spin_diagonals=spin_diagonals_np,
    partition_1d_brute=partition_1d_brute_np,
    partition_2d_brute=partition_2d_brute_np,
    trace_exp_grid=trace_exp_grid_np,
)


# -- numba --------------------------------------------------------------------

NUMBA_KERNELS = None

if numba is not None:
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def spin_diagonals_nb(n):
        size = 1 << n
        bond = np.empty(size, dtype=np.float64)
        mag = np.empty(size, dtype=np.float64)
        for c in range(size):
            b = 0
            m = 0
            for i in range(n):
                si = 1 - 2 * ((c >> (n - 1 - i)) & 1)
                k = (i + 1) % n
                sk = 1 - 2 * ((c >> (n - 1 - k)) & 1)
                b += si * sk
                m += si
            bond[c] = b
            mag[c] = m
        return bond, mag

    @njit
    def partition_1d_brute_nb(beta, J, h, n):
        shift = beta * abs(J) * n
        acc_re = 0.0
        acc_im = 0.0
        for c in range(1 << n):
            b = 0
            m = 0
            for i in range(n):
                si = 1 - 2 * ((c >> (n - 1 - i)) & 1)
                k = (i + 1) % n
                sk = 1 - 2 * ((c >> (n - 1 - k)) & 1)
                b += si * sk
                m += si
            amp = np.exp(beta * J * b - shift)
            phase = beta * h * m
            acc_re += amp * np.cos(phase)
            acc_im += amp * np.sin(phase)
        return complex(acc_re, acc_im) * np.exp(shift)

    @njit
    def partition_2d_brute_nb(beta, J1, J2, h, n, m):
        sites = n * m
        shift = beta * (abs(J1) + abs(J2)) * sites
        spins = np.empty(sites, dtype=np.int64)
        acc_re = 0.0
        acc_im = 0.0
        for c in range(1 << sites):
            for k in range(sites):
                spins[k] = 1 - 2 * ((c >> (sites - 1 - k)) & 1)
            b1 = 0
            b2 = 0
            mag = 0
            for j in range(m):
                for i in range(n):
                    s = spins[j * n + i]
                    b1 += s * spins[j * n + (i + 1) % n]
                    b2 += s * spins[((j + 1) % m) * n + i]
                    mag += s
            amp = np.exp(beta * (J1 * b1 + J2 * b2) - shift)
            phase = beta * h * mag
            acc_re += amp * np.cos(phase)
            acc_im += amp * np.sin(phase)
        return complex(acc_re, acc_im) * np.exp(shift)

    @njit
    def trace_exp_grid_nb(mu, times, rate):
        out = np.empty(times.shape[0], dtype=np.complex128)
        for j in range(times.shape[0]):
            t = times[j]
            acc = 0j
            for k in range(mu.shape[0]):
                acc += np.exp(t * mu[k] - rate * t)
            out[j] = acc
        return out

    NUMBA_KERNELS = SimpleNamespace(
        name="numba",
        spin_diagonals=spin_diagonals_nb,
        partition_1d_brute=partition_1d_brute_nb,
        partition_2d_brute=partition_2d_brute_nb,
        trace_exp_grid=trace_exp_grid_nb,
    )


def active():
    """Kernel namespace selected for this process."""
    return NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS


def spin_diagonals(n):
    """Periodic bond sum and magnetization for every basis state of ``n`` spins."""
    return active().spin_diagonals(int(n))


def partition_1d_brute(beta, J, h, n):
    return active().partition_1d_brute(float(beta), float(J), float(h), int(n))


def partition_2d_brute(beta, J1, J2, h, n, m):
    return active().partition_2d_brute(
        float(beta), float(J1), float(J2), float(h), int(n), int(m)
    )


def trace_exp_grid(mu, times, rate=0.0):
    """``sum_k exp(t * mu_k - rate * t)`` for every ``t`` in ``times``."""
    mu = np.ascontiguousarray(mu, dtype=np.complex128)
    times = np.ascontiguousarray(times, dtype=np.float64)
    return active().trace_exp_grid(mu, times, float(rate))
