"""The factor chi_F of the functional equation F(s) = chi_F(s) conj(F(1 - conj s)).

    chi_F(s) = omega Q^(1-2s) prod_j Gamma(lam_j (1-s) + conj mu_j) / Gamma(lam_j s + mu_j)

G = log chi_F has derivatives

    G'(s)    = -2 log Q + d_F gamma + sum_j lam_j (1/z1 + 1/z2 + H1(z1) + H1(z2))
    G^(l)(s) = sum_j lam_j^l (l-1)! ((-1)^(l-1) S_l(z1) + S_l(z2)),   l >= 2

with z1 = lam s + mu, z2 = lam (1-s) + conj mu, H1 the harmonic-type series
and S_l(z) = sum_{n>=0} (z+n)^(-l).  chi^(r)/chi is the complete Bell
polynomial in G', ..., G^(r).
"""

from __future__ import annotations

import contextlib
import contextvars
import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError, ValidationError
from .special import (DEFAULT_DELTA, EULER_GAMMA, POLE_TOL, chi_phase_term, log_gamma,
                      shifted_sums)

MAX_BELL_ORDER = 12

# multiplier applied to every chi value; only the test hook changes it
_CHI_FAULT: contextvars.ContextVar[complex] = contextvars.ContextVar("chi_fault", default=1.0)


@contextlib.contextmanager
def inject_chi_fault(factor: complex = np.exp(0.5j)):
    """Corrupt chi_F by a constant factor inside the block (verification hook)."""
    token = _CHI_FAULT.set(complex(factor))
    try:
        yield
    finally:
        _CHI_FAULT.reset(token)


def _as_points(s):
    arr = np.asarray(s, dtype=complex)
    return arr, np.atleast_1d(arr).ravel()


def _check_poles(datum, pts: np.ndarray):
    """Raise at s = -(mu_j + n)/lam_j or s = 1 + (conj mu_j + n)/lam_j."""
    for j, (lam, mu) in enumerate(zip(datum.lambdas, datum.mus)):
        for side, z in (("denominator", lam * pts + mu),
                        ("numerator", lam * (1 - pts) + mu.conjugate())):
            k = np.rint(z.real)
            hit = (k <= 0) & (np.abs(z - k) <= POLE_TOL)
            if hit.any():
                i = int(np.argmax(hit))
                raise DomainError(
                    f"Gamma pole in the {side} of chi at s = {complex(pts[i])} "
                    f"(factor j={j}, argument {int(k[i])})",
                    s=complex(pts[i]), j=j, pole=int(k[i]), side=side)


def log_chi(datum, s):
    """log chi_F(s) (branch of the sum of principal log-Gammas), without the fault hook."""
    arr, pts = _as_points(s)
    _check_poles(datum, pts)
    acc = np.log(complex(datum.omega)) + (1 - 2 * pts) * math.log(datum.Q)
    for lam, mu in zip(datum.lambdas, datum.mus):
        acc = acc + log_gamma(lam * (1 - pts) + mu.conjugate()) - log_gamma(lam * pts + mu)
    return complex(acc[0]) if arr.ndim == 0 else acc.reshape(arr.shape)


def chi_exact(datum, s):
    """chi_F(s) by log-space accumulation; scalar or array input."""
    val = np.exp(log_chi(datum, s)) * _CHI_FAULT.get()
    return complex(val) if np.ndim(val) == 0 else val


# ---------------------------------------------------------------------------
# Asymptotic form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChiAsymptotic:
    modulus: float
    phase: float
    omega: complex
    rel_error_budget: float
    constant: float

    @property
    def value(self) -> complex:
        return self.omega * self.modulus * complex(math.cos(self.phase), math.sin(self.phase))


def chi_phase(datum, t: float) -> float:
    """theta_F(t): Stirling phase of chi_F on the line Im s = t."""
    return (sum(chi_phase_term(lam, mu, t) for lam, mu in zip(datum.lambdas, datum.mus))
            - 2 * t * math.log(datum.Q))


_asym_constants: dict = {}
_asym_lock = threading.Lock()


def asymptotic_constant(datum) -> float:
    """Measured c with |chi_exact/leading - 1| <= c/|t| for |t| >= 10.

    Twice the largest observed |t|-scaled gap over sigma in [0, 1] and
    10 <= |t| <= 1000, both signs of t; cached per Gamma datum.
    """
    key = (datum.Q, datum.lambdas, datum.mus)
    with _asym_lock:
        if key in _asym_constants:
            return _asym_constants[key]
    worst = 0.0
    for t in np.concatenate([np.geomspace(10, 1000, 25), -np.geomspace(10, 1000, 25)]):
        for sigma in (0.0, 0.25, 0.5, 0.75, 1.0):
            lead = _leading(datum, sigma, t)
            exact = np.exp(log_chi(datum, complex(sigma, t))) / datum.omega
            worst = max(worst, abs(exact / lead - 1) * abs(t))
    c = 2 * worst
    with _asym_lock:
        _asym_constants[key] = c
    return c


def _leading(datum, sigma, t):
    C = datum.constants
    mod = C.C_F ** (0.5 - sigma) * abs(t) ** (C.d_F * (0.5 - sigma))
    return mod * np.exp(1j * chi_phase(datum, t))


def chi_asymptotic(datum, s) -> ChiAsymptotic:
    s = complex(s)
    sigma, t = s.real, s.imag
    if abs(t) < 10:
        raise DomainError(f"chi_asymptotic needs |t| >= 10, got {t}", t=t)
    C = datum.constants
    c = asymptotic_constant(datum)
    return ChiAsymptotic(
        modulus=C.C_F ** (0.5 - sigma) * abs(t) ** (C.d_F * (0.5 - sigma)),
        phase=chi_phase(datum, t),
        omega=datum.omega * _CHI_FAULT.get(),
        rel_error_budget=c / abs(t),
        constant=c)


# ---------------------------------------------------------------------------
# G tower and Bell composition
# ---------------------------------------------------------------------------


def g_tower_array(datum, s, lmax: int) -> np.ndarray:
    """Columns G^(1), ..., G^(lmax) at every point of ``s`` (shape (n, lmax))."""
    _, pts = _as_points(s)
    _check_poles(datum, pts)
    out = np.zeros((pts.size, lmax), dtype=complex)
    if lmax == 0:
        return out
    out[:, 0] = -2 * math.log(datum.Q) + datum.constants.d_F * EULER_GAMMA
    for lam, mu in zip(datum.lambdas, datum.mus):
        z1 = lam * pts + mu
        z2 = lam * (1 - pts) + mu.conjugate()
        h1 = shifted_sums(z1, lmax)
        h2 = shifted_sums(z2, lmax)
        out[:, 0] += lam * (1 / z1 + 1 / z2 + h1[:, 0] + h2[:, 0])
        for l in range(2, lmax + 1):
            s1 = h1[:, l - 1] + z1 ** (-l)
            s2 = h2[:, l - 1] + z2 ** (-l)
            out[:, l - 1] += lam ** l * math.factorial(l - 1) * ((-1) ** (l - 1) * s1 + s2)
    return out


def g_tower(datum, s, l: int):
    """G^(l)(s), the l-th derivative of log chi_F."""
    if int(l) != l or l < 1:
        raise ValidationError("l", f"must be a positive integer, got {l}")
    arr, pts = _as_points(s)
    col = g_tower_array(datum, pts, int(l))[:, l - 1]
    return complex(col[0]) if arr.ndim == 0 else col.reshape(arr.shape)


@dataclass(frozen=True)
class BellExpansion:
    """chi^(r)/chi = sum over terms C * prod_i (G^(i))^(l_i)."""

    order: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def evaluate(self, G: np.ndarray) -> np.ndarray:
        """Apply to a tower array G with columns G^(1), ..., G^(r)."""
        G = np.atleast_2d(G)
        out = np.zeros(G.shape[0], dtype=complex)
        if self.order == 0:
            return out + 1
        for idx, coeff in self.terms:
            prod = np.full(G.shape[0], float(coeff), dtype=complex)
            for i, e in enumerate(idx):
                if e:
                    prod = prod * G[:, i] ** e
            out += prod
        return out


def _partitions(r: int, largest: int):
    """Multiplicity vectors (l_1, ..., l_r) with sum i*l_i = r."""
    if r == 0:
        yield ()
        return
    for part in range(min(r, largest), 0, -1):
        for rest in _partitions(r - part, part):
            yield (part,) + rest


@lru_cache(maxsize=None)
def bell_expansion(r: int) -> BellExpansion:
    if int(r) != r or r < 0:
        raise ValidationError("r", f"must be a nonnegative integer, got {r}")
    if r > MAX_BELL_ORDER:
        raise CapacityError(f"Bell order {r} exceeds the cap {MAX_BELL_ORDER}",
                            requested=int(r), limit=MAX_BELL_ORDER)
    terms = []
    for parts in _partitions(r, r):
        ell = [0] * r
        for p in parts:
            ell[p - 1] += 1
        denom = 1
        for i, e in enumerate(ell, start=1):
            denom *= math.factorial(e) * math.factorial(i) ** e
        terms.append((tuple(ell), math.factorial(r) // denom))
    terms.sort()
    return BellExpansion(order=int(r), terms=tuple(terms))


def pole_regions(datum, s, delta: float = DEFAULT_DELTA) -> bool:
    """True if s lies in E1 or E2: some Gamma argument has Re < delta and |Im| < 1."""
    s = complex(s)
    for lam, mu in zip(datum.lambdas, datum.mus):
        for z in (lam * s + mu, lam * (1 - s) + mu.conjugate()):
            if z.real < delta and abs(z.imag) < 1:
                return True
    return False


def chi_log_ratio(datum, s, r: int, exclude_regions: bool = False):
    """(chi_F^(r)/chi_F)(s) via the Bell composition of the G tower.

    Poles of the Gamma factors always raise; with ``exclude_regions`` the
    whole buffer E1 u E2 around them is rejected as well.
    """
    arr, pts = _as_points(s)
    expansion = bell_expansion(r)
    if exclude_regions:
        for p in pts:
            if pole_regions(datum, p):
                raise DomainError(f"s = {complex(p)} lies in a pole region", s=complex(p))
    if r == 0:
        _check_poles(datum, pts)
        vals = np.ones(pts.size, dtype=complex)
    else:
        vals = expansion.evaluate(g_tower_array(datum, pts, r))
    return complex(vals[0]) if arr.ndim == 0 else vals.reshape(arr.shape)


def chi_log_ratios(datum, s, rmax: int) -> np.ndarray:
    """All (chi^(r)/chi)(s), r = 0..rmax, sharing one G tower; shape (n, rmax+1)."""
    _, pts = _as_points(s)
    G = g_tower_array(datum, pts, max(rmax, 1))
    out = np.empty((pts.size, rmax + 1), dtype=complex)
    for r in range(rmax + 1):
        out[:, r] = bell_expansion(r).evaluate(G[:, :r]) if r else 1.0
    return out


def chi_derivative(datum, s, r: int):
    """chi_F^(r)(s) = chi_F(s) (chi_F^(r)/chi_F)(s)."""
    return chi_exact(datum, s) * chi_log_ratio(datum, s, r)
