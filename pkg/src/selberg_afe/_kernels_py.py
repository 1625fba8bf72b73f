"""Pure-Python/numpy versions of the compiled kernels.

Sums are formed with :func:`math.fsum` on the real and imaginary parts,
which is correctly rounded; the compiled kernels use Neumaier
compensation, so the two backends agree to a few ulps.
"""

from __future__ import annotations

import math

import numpy as np

STIRLING = np.array([
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
])

HALF_LOG_2PI = 0.91893853320467274178032973640562


def _csum(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def power_sums(z, lmax: int, n_terms: int) -> np.ndarray:
    z = np.ascontiguousarray(z, dtype=complex)
    out = np.zeros((z.size, lmax), dtype=complex)
    n = np.arange(1, n_terms + 1, dtype=float)
    for i, zi in enumerate(z):
        inv = 1.0 / (zi + n)
        out[i, 0] = _csum(-zi * inv / n)
        p = inv
        for l in range(1, lmax):
            p = p * inv
            out[i, l] = _csum(p)
    return out


def dirichlet_sums(a, s: complex, kmax: int, weights=None) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    N = a.size
    if weights is not None:
        weights = np.asarray(weights, dtype=complex)
        if weights.size != N:
            raise ValueError("weights and coefficients differ in length")
    out = np.zeros(kmax + 1, dtype=complex)
    if N == 0:
        return out
    ln = np.log(np.arange(1, N + 1, dtype=float))
    term = a * np.exp(-complex(s) * ln)
    if weights is not None:
        term = term * weights
    out[0] = _csum(term)
    for k in range(1, kmax + 1):
        term = term * -ln
        out[k] = _csum(term)
    return out


def _loggamma_one(z: complex) -> complex:
    x, y = z.real, z.imag
    shift = 0
    if x < 10.0 and abs(y) < 10.0:
        shift = math.ceil(10.0 - x)
    elif x < 0.0:
        shift = math.ceil(-x)
    acc = 0j
    if shift:
        acc = _csum(np.log(z + np.arange(shift)))
    zz = z + shift
    inv = 1.0 / zz
    inv2 = inv * inv
    series = STIRLING[9]
    for k in range(8, -1, -1):
        series = series * inv2 + STIRLING[k]
    series *= inv
    return (zz - 0.5) * (np.log(zz) - 1.0) - 0.5 + HALF_LOG_2PI + series - acc


def loggamma(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.array([_loggamma_one(complex(v)) for v in z], dtype=complex)
