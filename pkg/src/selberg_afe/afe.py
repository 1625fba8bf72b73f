"""Approximate functional equations for F^(m)(s) in the critical strip.

Sharp form, cutoffs y1 y2 = C_F |t|^d:

    F^(m)(s) ~ sum_{n<=y1} a(n) (-log n)^m n^-s
               + sum_r (-1)^r C(m,r) chi^(m-r)(s) sum_{n<=y2} conj a(n) (-log n)^r n^(s-1)

Smoothed form with a cutoff phi and its dual phi_0:

    F^(m)(s) ~ sum_{n<=2y1} a(n) (-log n)^m n^-s sum_j phi^(j)(n/y1) (-n/y1)^j gamma_j^(0)(s)
               + chi(s) sum_r (-1)^r C(m,r) sum_{n<=2y2} conj a(n) (-log n)^r n^(s-1)
                        * sum_j phi_0^(j)(n/y2) (-n/y2)^j delta_j^(m-r)(1-s)

The j = 0 terms are the main sums (gamma_0^(0) = 1 and
delta_0^(m-r)(1-s) = chi^(m-r)/chi(s)); the j >= 1 terms form the
correction.  Error budgets are the O-terms of the two equations times
constants measured on zeta (see ``calibration``).
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import kernels
from .chi import chi_exact, chi_log_ratios
from .contour import contour_coefficients, g_regularizer  # noqa: F401  (re-export)
from .errors import DomainError, HypothesisError, SmoothnessError, ValidationError
from .smoothing import MAX_DERIVATIVE, SmoothingFunction, base_bump

EPSILON = 0.05
MAX_M = 6
MAX_L = 12
MIN_T = 10.0


@dataclass
class AfeResult:
    value: complex
    main_sum_1: complex
    main_sum_2: complex
    correction: complex
    error_estimate: float
    cutoffs: tuple[float, float]
    mode: str
    m: int
    s: complex
    terms: tuple[int, int]
    diagnostics: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        return {
            "value_re": self.value.real, "value_im": self.value.imag,
            "main1_re": self.main_sum_1.real, "main1_im": self.main_sum_1.imag,
            "main2_re": self.main_sum_2.real, "main2_im": self.main_sum_2.imag,
            "correction_re": self.correction.real, "correction_im": self.correction.imag,
            "budget": self.error_estimate, "y1": self.cutoffs[0], "y2": self.cutoffs[1],
            "n1": self.terms[0], "n2": self.terms[1],
        }


# ---------------------------------------------------------------------------
# Calibration constants
# ---------------------------------------------------------------------------

_CAL = None
_CAL_LOCK = threading.Lock()
_DEFAULT_CONSTANT = 1.0


def load_calibration(refresh: bool = False) -> dict:
    """The checked-in error constants, keyed '<mode>:<m>'."""
    global _CAL
    with _CAL_LOCK:
        if _CAL is None or refresh:
            try:
                text = resources.files("selberg_afe").joinpath("data/calibration.json").read_text()
                _CAL = json.loads(text)
            except FileNotFoundError:
                _CAL = {"constants": {}}
        return _CAL


def error_constant(mode: str, m: int) -> float:
    return float(load_calibration()["constants"].get(f"{mode}:{m}", _DEFAULT_CONSTANT))


# ---------------------------------------------------------------------------
# Shared pieces
# ---------------------------------------------------------------------------


def _check_point(datum, s: complex, m: int):
    if not (0 <= s.real <= 1):
        raise HypothesisError(f"sigma outside [0,1]: {s.real}", field="sigma", sigma=s.real)
    if abs(s.imag) < MIN_T:
        raise HypothesisError(f"|t| must be >= {MIN_T:g}, got {abs(s.imag)}", field="t",
                              t=s.imag)
    if int(m) != m or not 0 <= m <= MAX_M:
        raise ValidationError("m", f"must be an integer in [0, {MAX_M}]")


def cutoffs(datum, t: float, y_split: float | None = None) -> tuple[float, float]:
    """(y1, y2) with y1 = k y0, y2 = y0 / k, y0 = sqrt(C_F) |t|^(d/2)."""
    C = datum.constants
    y0 = math.sqrt(C.C_F) * abs(t) ** (C.d_F / 2)
    k = 1.0 if y_split is None else float(y_split)
    if not (k > 0 and math.isfinite(k)):
        raise ValidationError("y_split", f"must be a positive ratio, got {y_split}")
    return k * y0, y0 / k


def _floor(y: float) -> int:
    # guard against y = integer - 1 ulp from the product above
    return int(math.floor(y * (1 + 4e-16)))


def _binom_signs(m: int) -> np.ndarray:
    return np.array([(-1) ** r * math.comb(m, r) for r in range(m + 1)], dtype=float)


def sharp_budget(datum, s: complex, m: int, y1: float, y2: float) -> float:
    sigma, t = s.real, abs(s.imag)
    d = datum.constants.d_F
    c = error_constant("sharp", m)
    return c * (y1 ** (1 - sigma + EPSILON) * t ** -0.5
                + y2 ** (sigma + EPSILON) * t ** (d * (0.5 - sigma) - 0.5))


def smoothed_budget(datum, s: complex, m: int, y1: float, y2: float, phi, l: int) -> float:
    sigma, t = s.real, abs(s.imag)
    C = datum.constants
    p = max(C.pole_order - 1, 0)
    c = error_constant("smoothed", m)
    L1 = math.log(max(y1, math.e))
    L2 = math.log(max(y2, math.e))
    Lt = math.log(t)
    e1 = y1 ** (1 - sigma) * L1 ** (m + p) * t ** (-l / 2) * phi.l1_norm(l + 1)
    e2 = (y2 ** sigma * t ** (C.d_F * (0.5 - sigma) - l / 2) * phi.dual().l1_norm(l + 1)
          * sum(L2 ** (r + p) * Lt ** (m - r) for r in range(m + 1)))
    return c * (e1 + e2)


# ---------------------------------------------------------------------------
# Sharp cutoffs
# ---------------------------------------------------------------------------


def afe_sharp(datum, s, m: int = 0, y_split: float | None = None) -> AfeResult:
    s = complex(s)
    _check_point(datum, s, m)
    y1, y2 = cutoffs(datum, s.imag, y_split)
    n1, n2 = _floor(y1), _floor(y2)
    sum1 = 0j
    if n1 >= 1:
        a = np.ascontiguousarray(datum.coefficients(n1))
        sum1 = complex(kernels.dirichlet_sums(a, s, m)[m])
    chi = chi_exact(datum, s)
    R = chi_log_ratios(datum, s, m)[0]
    sum2 = 0j
    if n2 >= 1:
        abar = np.ascontiguousarray(np.conj(datum.coefficients(n2)))
        T = kernels.dirichlet_sums(abar, 1 - s, m)
        signs = _binom_signs(m)
        sum2 = chi * complex(np.sum(signs * R[m - np.arange(m + 1)] * T))
    budget = sharp_budget(datum, s, m, y1, y2)
    return AfeResult(value=sum1 + sum2, main_sum_1=sum1, main_sum_2=sum2, correction=0j,
                     error_estimate=budget, cutoffs=(y1, y2), mode="sharp", m=int(m), s=s,
                     terms=(n1, n2), diagnostics={"chi": chi})


# ---------------------------------------------------------------------------
# Smooth cutoffs
# ---------------------------------------------------------------------------


def _phi_weights(phi: SmoothingFunction, u: np.ndarray, l: int) -> np.ndarray:
    """Rows j = 0..l of phi^(j)(u) (-u)^j."""
    out = np.empty((l + 1, u.size))
    for j in range(l + 1):
        out[j] = phi.eval(j, u) * (-u) ** j
    return out


def default_l(datum, m: int) -> int:
    """Smallest admissible smoothing order, floor(M_F(m)) + 1."""
    return int(math.floor(datum.constants.M_F(m))) + 1


def afe_smoothed(datum, s, m: int = 0, phi: SmoothingFunction | None = None,
                 l: int | None = None, y_split: float | None = None,
                 enclose_all: bool = True) -> AfeResult:
    """Smoothed equation with the contour coefficients at the default rho.

    Poles w = -k of the coefficient integrands that sit next to the
    stadium (small |t| against l) are handled by deforming the path; with
    ``enclose_all`` every pole w = 0..-l counts as enclosed.
    """
    s = complex(s)
    _check_point(datum, s, m)
    phi = base_bump() if phi is None else phi
    if phi.is_sharp:
        raise SmoothnessError("the smoothed equation needs a smooth cutoff, got xi")
    MF = datum.constants.M_F(m)
    l = default_l(datum, m) if l is None else int(l)
    if l <= MF:
        raise HypothesisError(f"l = {l} must exceed M_F = {MF:g}", field="l", M_F=MF, l=l)
    if l > MAX_L or l + 1 > MAX_DERIVATIVE:
        raise HypothesisError(
            f"l = {l} exceeds the cap {MAX_L} (M_F = {MF:g}); smoothed mode unavailable",
            field="l", M_F=MF, l=l, cap=MAX_L)
    phi0 = phi.dual()
    y1, y2 = cutoffs(datum, s.imag, y_split)
    n1 = _floor(phi.support[1] * y1)
    n2 = _floor(phi0.support[1] * y2)

    opts = {"degenerate": "deform", "enclose_all": enclose_all}
    gam = contour_coefficients(datum, s, m, l, 0, "gamma", **opts).values[0]
    dlt = contour_coefficients(datum, 1 - s, m, l, m, "delta", **opts).values

    main1 = corr1 = 0j
    if n1 >= 1:
        n = np.arange(1, n1 + 1, dtype=float)
        W = _phi_weights(phi, n / y1, l)
        a = np.ascontiguousarray(datum.coefficients(n1))
        main1 = complex(kernels.dirichlet_sums(a, s, m, W[0] * gam[0])[m])
        corr1 = complex(kernels.dirichlet_sums(a, s, m, W[1:].T @ gam[1:])[m])

    chi = chi_exact(datum, s)
    main2 = corr2 = 0j
    if n2 >= 1:
        n = np.arange(1, n2 + 1, dtype=float)
        W = _phi_weights(phi0, n / y2, l)
        abar = np.ascontiguousarray(np.conj(datum.coefficients(n2)))
        signs = _binom_signs(m)
        for r in range(m + 1):
            coeff = dlt[m - r]
            T0 = kernels.dirichlet_sums(abar, 1 - s, r, W[0] * coeff[0])[r]
            T1 = kernels.dirichlet_sums(abar, 1 - s, r, W[1:].T @ coeff[1:])[r]
            main2 += signs[r] * T0
            corr2 += signs[r] * T1
        main2 *= chi
        corr2 *= chi

    budget = smoothed_budget(datum, s, m, y1, y2, phi, l)
    return AfeResult(value=main1 + corr1 + main2 + corr2, main_sum_1=main1, main_sum_2=main2,
                     correction=corr1 + corr2, error_estimate=budget, cutoffs=(y1, y2),
                     mode="smoothed", m=int(m), s=s, terms=(n1, n2),
                     diagnostics={"l": l, "M_F": MF, "gamma": gam, "chi": chi})


# ---------------------------------------------------------------------------
# Reflection identity
# ---------------------------------------------------------------------------


def reflect_fdfe(datum, s, m: int, values_at_reflection) -> complex:
    """sum_r (-1)^r C(m,r) chi^(m-r)(s) Fbar^(r)(1-s), given Fbar^(r)(1-s), r = 0..m."""
    vals = np.asarray(values_at_reflection, dtype=complex).ravel()
    if vals.size != m + 1:
        raise ValidationError("values_at_reflection",
                              f"expected {m + 1} values, got {vals.size}")
    s = complex(s)
    chi = chi_exact(datum, s)
    R = chi_log_ratios(datum, s, m)[0]
    signs = _binom_signs(m)
    return complex(chi * np.sum(signs * R[m - np.arange(m + 1)] * vals))


def evaluate(datum, s, m: int = 0, mode: str = "sharp", **kw) -> AfeResult:
    if mode == "sharp":
        return afe_sharp(datum, s, m, y_split=kw.get("y_split"))
    if mode == "smoothed":
        return afe_smoothed(datum, s, m, phi=kw.get("phi"), l=kw.get("l"),
                            y_split=kw.get("y_split"))
    raise ValidationError("mode", f"expected sharp or smoothed, got {mode!r}")
