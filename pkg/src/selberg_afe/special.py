"""Complex log-Gamma, Gamma ratios and Hurwitz-type tail sums.

The sums

    S_l(s) = sum_{n>=1} (s + n)^(-l),          l >= 2
    H_1(s) = sum_{n>=1} (1/(s + n) - 1/n)

are evaluated by direct summation to N = max(1000, ceil(50|s|)) terms
followed by an Euler-Maclaurin tail (integral, half end term and the B2,
B4 corrections).  The public functions refuse points of the region
D = {Re s < delta, |Im s| < 1} in which the tail bounds were never
claimed; the internal ``shifted_*`` variants move the argument out of D
with the recurrence and only fail at actual poles.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .errors import DomainError, ValidationError

EULER_GAMMA = 0.577215664901532860606512090082
DEFAULT_DELTA = 0.1
POLE_TOL = 1e-9
SHIFTED_TERMS = 1000

_B2 = 1.0 / 6.0
_B4 = -1.0 / 30.0


def _nearest_pole(z: complex, tol: float = 0.0):
    """The nonpositive integer within ``tol`` of z, or None."""
    k = round(z.real)
    if k <= 0 and abs(z - k) <= tol:
        return int(k)
    return None


def log_gamma(z):
    """Principal branch of log Gamma(z); accepts scalars or arrays."""
    arr = np.asarray(z, dtype=complex)
    flat = arr.ravel()
    for v in flat:
        if not np.isfinite(v):
            raise DomainError(f"non-finite argument {complex(v)}", z=complex(v))
        k = _nearest_pole(complex(v))
        if k is not None:
            raise DomainError(f"log_gamma has a pole at z = {k}", pole=k)
    out = kernels.loggamma(np.ascontiguousarray(flat)).reshape(arr.shape)
    return complex(out) if arr.ndim == 0 else out


def in_excluded_region(s: complex, delta: float = DEFAULT_DELTA) -> bool:
    return s.real < delta and abs(s.imag) < 1


def _terms(z: complex) -> int:
    return max(1000, math.ceil(50 * abs(z)))


def _power_tail(z: np.ndarray, l: int, N: int) -> np.ndarray:
    """sum_{n>N} (z+n)^(-l) by Euler-Maclaurin at the node n = N."""
    x = z + N
    integral = x ** (1 - l) / (l - 1)
    f = x ** (-l)
    d1 = -l * x ** (-l - 1)
    d3 = -l * (l + 1) * (l + 2) * x ** (-l - 3)
    return integral - f / 2 - _B2 / 2 * d1 - _B4 / 24 * d3


def _harmonic_tail(z: np.ndarray, N: int) -> np.ndarray:
    """sum_{n>N} (1/(z+n) - 1/n) by Euler-Maclaurin at n = N."""
    x = z + N
    integral = -np.log1p(z / N)
    f = 1 / x - 1 / N
    d1 = -1 / x ** 2 + 1 / N ** 2
    d3 = -6 / x ** 4 + 6 / N ** 4
    return integral - f / 2 - _B2 / 2 * d1 - _B4 / 24 * d3


def _raw_sums(z: np.ndarray, lmax: int, N: int | None = None) -> np.ndarray:
    """Columns H_1, S_2, ..., S_lmax for points already away from poles.

    With ``N`` given every point uses that head length in one batched
    call; otherwise each point gets max(1000, 50|z|) terms.
    """
    lmax = max(lmax, 1)
    if N is not None:
        z = np.ascontiguousarray(z, dtype=complex)
        out = kernels.power_sums(z, lmax, N)
        out[:, 0] += _harmonic_tail(z, N)
        for l in range(2, lmax + 1):
            out[:, l - 1] += _power_tail(z, l, N)
        return out
    out = np.empty((z.size, lmax), dtype=complex)
    for i, zi in enumerate(z):
        out[i] = _raw_sums(np.array([zi]), lmax, _terms(zi))[0]
    return out


def _check_region(s: complex, delta: float):
    if not np.isfinite(s):
        raise DomainError(f"non-finite argument {s}", s=s)
    if in_excluded_region(s, delta):
        raise DomainError(
            f"s = {s} lies in the excluded region Re s < {delta}, |Im s| < 1",
            s=s, delta=delta)


def haff_sum_l(s: complex, l: int, delta: float = DEFAULT_DELTA) -> complex:
    """sum_{n>=1} (s+n)^(-l) for integer l >= 2."""
    if int(l) != l or l < 2:
        raise ValidationError("l", f"must be an integer >= 2, got {l}")
    s = complex(s)
    _check_region(s, delta)
    return complex(_raw_sums(np.array([s]), int(l))[0, l - 1])


def haff_sum_1(s: complex, delta: float = DEFAULT_DELTA) -> complex:
    """sum_{n>=1} (1/(s+n) - 1/n) = -gamma - digamma(s+1)."""
    s = complex(s)
    _check_region(s, delta)
    return complex(_raw_sums(np.array([s]), 1)[0, 0])


def shifted_sums(z, lmax: int) -> np.ndarray:
    """Internal: columns [H_1(z), S_2(z), ..., S_lmax(z)] for any z off the poles.

    H_1 and S_l are defined by their series wherever z + n != 0 for all
    n >= 1.  Arguments with small real part are shifted by K and the
    finitely many removed terms are added back.  One head length
    N = max(SHIFTED_TERMS, 2 max|z|) serves the whole batch: the tail
    expansion only needs |z + N| large, not N large against |z|.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    shifts = np.zeros(z.size, dtype=int)
    for i, zi in enumerate(z):
        zi = complex(zi)
        k = _nearest_pole(zi + 1, POLE_TOL)
        if k is not None:
            raise DomainError(f"series pole at z = {k - 1}", pole=k - 1)
        if zi.real < 1 and abs(zi.imag) < 1:
            shifts[i] = math.ceil(1 - zi.real)
    N = max(SHIFTED_TERMS, math.ceil(2 * float(np.max(np.abs(z)))) if z.size else 0)
    out = _raw_sums(z + shifts, lmax, N)
    for i in np.nonzero(shifts)[0]:
        zi, K = complex(z[i]), int(shifts[i])
        n = np.arange(1, K + 1)
        inv = 1 / (zi + n)
        # H1(z) - H1(z+K) = sum_{n=1}^K 1/(z+n) - sum_{n=1}^K 1/n
        out[i, 0] += math.fsum(inv.real) - math.fsum(1 / n) + 1j * math.fsum(inv.imag)
        for l in range(2, lmax + 1):
            p = inv ** l
            out[i, l - 1] += complex(math.fsum(p.real), math.fsum(p.imag))
    return out


def hurwitz_power(z, l: int) -> np.ndarray:
    """Internal: sum_{n>=0} (z+n)^(-l), l >= 2, for z off the poles."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    for zi in z:
        k = _nearest_pole(complex(zi), POLE_TOL)
        if k is not None:
            raise DomainError(f"series pole at z = {k}", pole=k)
    return shifted_sums(z, l)[:, l - 1] + z ** (-l)


def gamma_ratio_asymptotic(lam: float, mu: complex, s: complex) -> tuple[complex, complex]:
    """Gamma(lam(1-s) + conj mu) / Gamma(lam s + mu): exact value and leading form.

    The leading form is (lam|t|)^(lam(1-2 sigma)) e^(i theta) with

        theta = sgn(t) [(1 - lam - 2 Re mu) pi/2 + 2 lam|t|
                        - 2 (lam|t| + sgn(t) Im mu) log(lam|t|)],

    which follows from Stirling's formula for both Gammas.
    """
    s = complex(s)
    mu = complex(mu)
    sigma, t = s.real, s.imag
    if abs(t) < 2:
        raise DomainError(f"|t| = {abs(t)} below 2", t=t)
    num = lam * (1 - s) + mu.conjugate()
    den = lam * s + mu
    exact = np.exp(log_gamma(num) - log_gamma(den))
    lead = np.exp(lam * (1 - 2 * sigma) * math.log(lam * abs(t))
                  + 1j * chi_phase_term(lam, mu, t))
    return complex(exact), complex(lead)


def chi_phase_term(lam: float, mu: complex, t: float) -> float:
    """Stirling phase of one Gamma ratio (see :func:`gamma_ratio_asymptotic`)."""
    sg = 1.0 if t > 0 else -1.0
    at = lam * abs(t)
    return sg * ((1 - lam - 2 * mu.real) * math.pi / 2 + 2 * at
                 - 2 * (at + sg * mu.imag) * math.log(at))
