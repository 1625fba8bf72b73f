"""Independent reference values and the identity-residual suite.

Nothing here calls the summation kernels used by the approximate
functional equations: every sum is formed with numpy terms and
``math.fsum``.

* ``euler_maclaurin_zeta``: zeta^(m)(s) anywhere off s = 1 from the
  Euler-Maclaurin formula with B_2..B_16, differentiated in closed form.
* ``direct_series``: the Dirichlet series in sigma >= 1.1 with a tail bound.
* ``cauchy_circle``: derivatives from values on a circle.
* ``residual_suite``: engine-vs-oracle and identity rows for one datum.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import bernoulli, gammaincc

from .errors import (AccuracyError, CapacityError, CoefficientRangeError, DomainError,
                     ValidationError)

MAX_M = 6
BERNOULLI_TERMS = 8
MIN_DIRECT_SIGMA = 1.1
_B = bernoulli(2 * BERNOULLI_TERMS + 2)


@dataclass(frozen=True)
class OracleConfig:
    method: str = "euler_maclaurin_zeta"
    target_abs_tol: float = 1e-10
    max_terms: int = 100_000
    circle_radius: float = 0.25

    def __post_init__(self):
        if self.method not in ("direct_series", "euler_maclaurin_zeta", "cauchy_circle"):
            raise ValidationError("method", f"unknown oracle method {self.method!r}")
        if not self.target_abs_tol >= 1e-13:
            raise ValidationError("target_abs_tol", "must be >= 1e-13")
        if self.max_terms < 1:
            raise ValidationError("max_terms", "must be positive")
        if not self.circle_radius > 0:
            raise ValidationError("circle_radius", "must be positive")


DEFAULT_CONFIG = OracleConfig()


def _csum(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real), math.fsum(z.imag))


def _check_m(m):
    if int(m) != m or not 0 <= m <= MAX_M:
        raise ValidationError("m", f"must be an integer in [0, {MAX_M}]")


# ---------------------------------------------------------------------------
# Euler-Maclaurin for zeta and its derivatives
# ---------------------------------------------------------------------------


def _em_tail(s: complex, m: int, N: int, K: int) -> tuple[complex, float]:
    """d^m/ds^m of sum_{n>=N} n^-s by Euler-Maclaurin at N; also |next term|.

    sum_{n>=N} n^-s = N^(1-s)/(s-1) + N^-s/2
                      + sum_k B_2k/(2k)! s(s+1)..(s+2k-2) N^(-s-2k+1) + R
    """
    L = math.log(N)
    Ns = N ** (-s)
    acc = 0j
    # N^(1-s)/(s-1): Leibniz between N^(1-s) and 1/(s-1)
    for i in range(m + 1):
        acc += (math.comb(m, i) * (-L) ** (m - i) * N * Ns
                * (-1) ** i * math.factorial(i) / (s - 1) ** (i + 1))
    acc += 0.5 * (-L) ** m * Ns
    nxt = 0.0
    for k in range(1, K + 2):
        poly = np.poly1d([1.0])
        for i in range(2 * k - 1):
            poly = poly * np.poly1d([1.0, float(i)])
        c = _B[2 * k] / math.factorial(2 * k)
        base = Ns * N ** (1 - 2 * k)
        term, p = 0j, poly
        for i in range(min(m, poly.order) + 1):
            term += math.comb(m, i) * p(s) * (-L) ** (m - i)
            p = p.deriv()
        term *= c * base
        if k <= K:
            acc += term
        else:
            nxt = abs(term)
    return acc, nxt


def _head(s: complex, m: int, N: int) -> complex:
    """sum_{n<N} (-log n)^m n^-s."""
    n = np.arange(1, N, dtype=float)
    ln = np.log(n)
    return _csum((-ln) ** m * np.exp(-s * ln))


def euler_maclaurin_zeta(s, m: int = 0, cfg: OracleConfig = DEFAULT_CONFIG) -> complex:
    """zeta^(m)(s); head length N = max(20, ceil(2|t|)), doubled if needed."""
    s = complex(s)
    _check_m(m)
    if abs(s - 1) < 1e-12:
        raise DomainError("zeta has a pole at s = 1", s=s, pole=1)
    N = max(20, math.ceil(2 * abs(s.imag)))
    while True:
        tail, est = _em_tail(s, m, N, BERNOULLI_TERMS)
        if est <= cfg.target_abs_tol:
            return _head(s, m, N) + tail
        if 2 * N > cfg.max_terms:
            raise AccuracyError(f"Euler-Maclaurin remainder {est:.3g} above tolerance",
                                estimate=est, terms=N)
        N *= 2


# ---------------------------------------------------------------------------
# Direct series in the half-plane of absolute convergence
# ---------------------------------------------------------------------------


def _envelope_tail(A: float, a: float, m: int, N: int) -> float:
    """A * int_N^inf x^(-1-a) (log x)^m dx = A Gamma(m+1, a log N) / a^(m+1)."""
    return A * math.gamma(m + 1) * gammaincc(m + 1, a * math.log(N)) / a ** (m + 1)


def direct_series(datum, s, m: int = 0, cfg: OracleConfig = DEFAULT_CONFIG,
                  growth_epsilon: float | None = None) -> complex:
    """sum a(n) (-log n)^m n^-s for sigma >= 1.1.

    The zeta kind closes the sum with the Euler-Maclaurin tail.  Other
    kinds use the envelope |a(n)| <= A n^eps, with A the largest
    |a(n)|/n^eps seen so far, and grow the length until the integral
    bound of the tail is below the tolerance.
    """
    s = complex(s)
    _check_m(m)
    if s.real < MIN_DIRECT_SIGMA:
        raise DomainError(f"direct series needs sigma >= {MIN_DIRECT_SIGMA}, got {s.real}",
                          sigma=s.real)
    src = datum.coeff_source
    if src.kind == "zeta":
        N = 1000
        while True:
            tail, est = _em_tail(s, m, N, BERNOULLI_TERMS)
            if est <= cfg.target_abs_tol:
                return _head(s, m, N) + tail
            if 2 * N > cfg.max_terms:
                raise CapacityError("tail bound unreachable", achieved=est, terms=N)
            N *= 2
    eps = src.growth_epsilon if growth_epsilon is None else growth_epsilon
    a = s.real - eps - 1
    N = min(1000, cfg.max_terms)
    while True:
        try:
            coeff = datum.coefficients(N)
        except CoefficientRangeError as exc:
            raise CapacityError(f"tail bound unreachable: {exc}", terms=N) from None
        n = np.arange(1, N + 1, dtype=float)
        A = float(np.max(np.abs(coeff) / n ** eps))
        bound = _envelope_tail(A, a, m, N) if a > 0 else math.inf
        if bound <= cfg.target_abs_tol or N >= cfg.max_terms:
            break
        N = min(2 * N, cfg.max_terms)
    if bound > cfg.target_abs_tol:
        raise CapacityError(f"tail bound {bound:.3g} unreachable within {N} terms",
                            achieved=bound, terms=N)
    ln = np.log(n)
    return _csum(coeff * (-ln) ** m * np.exp(-s * ln))


# ---------------------------------------------------------------------------
# Cauchy integral on a circle
# ---------------------------------------------------------------------------


def _circle_estimate(f, s: complex, m: int, r: float, n: int) -> complex:
    theta = 2 * np.pi * np.arange(n) / n
    z = s + r * np.exp(1j * theta)
    try:
        vals = np.asarray(f(z), dtype=complex)
        if vals.shape != z.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([complex(f(complex(p))) for p in z])
    return math.factorial(m) * _csum(vals * np.exp(-1j * m * theta)) / n / r ** m


def cauchy_circle(f, s, m: int, cfg: OracleConfig | None = None, poles=()) -> complex:
    """f^(m)(s) from 64(m+1) equispaced values on |z - s| = r, node-doubled.

    ``poles`` lists known singularities; the circle must stay 2r away.
    """
    cfg = cfg or OracleConfig(method="cauchy_circle")
    s = complex(s)
    if int(m) != m or m < 0:
        raise ValidationError("m", "must be a nonnegative integer")
    r = cfg.circle_radius
    for p in poles:
        if abs(s - p) < 2 * r:
            raise DomainError(f"circle of radius {r} around {s} too close to the pole {p}",
                              s=s, pole=p)
    n = 64 * (m + 1)
    coarse = _circle_estimate(f, s, m, r, n)
    fine = _circle_estimate(f, s, m, r, 2 * n)
    err = abs(fine - coarse)
    if err > cfg.target_abs_tol:
        raise AccuracyError(f"circle estimate moved by {err:.3g} on doubling",
                            estimate=err, nodes=2 * n)
    return fine


# ---------------------------------------------------------------------------
# Residual suite
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("label", "sigma", "t", "m", "mode", "value_re", "value_im",
               "residual", "budget", "pass")
DEFAULT_SPLITS = (0.25, 0.5, 2.0)
SLOPE_WINDOW = (-0.45, -0.05)


@dataclass
class Report:
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.rows)

    def add(self, label, s, m, mode, value, residual, budget, ok=None):
        ok = bool(residual <= budget) if ok is None else bool(ok)
        self.rows.append({"label": label, "sigma": s.real, "t": s.imag, "m": int(m),
                          "mode": mode, "value_re": value.real, "value_im": value.imag,
                          "residual": float(residual), "budget": float(budget), "pass": ok})

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(r[c]) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_records(self) -> list[dict]:
        return [{c: r[c] for c in CSV_COLUMNS} for r in self.rows]


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def is_zeta(datum) -> bool:
    return (datum.coeff_source.kind == "zeta" and datum.q == 1
            and datum.lambdas == (0.5,) and datum.mus == (0j,)
            and abs(datum.Q - math.pi ** -0.5) < 1e-15 and datum.omega == 1)


def fdfe_residual(datum, s, m):
    """F^(m)(s) by the sharp equation against the reflection of Fbar^(r)(1-s).

    Returns (direct value, residual, combined budget).
    """
    from .afe import afe_sharp, reflect_fdfe
    from .chi import chi_exact, chi_log_ratios

    s = complex(s)
    direct = afe_sharp(datum, s, m)
    refl = (1 - s).conjugate()
    conj_datum = datum if datum.is_real else datum.conjugate()
    vals, budget = [], direct.error_estimate
    R = chi_log_ratios(datum, s, m)[0]
    chi = abs(chi_exact(datum, s))
    for r in range(m + 1):
        res = afe_sharp(conj_datum, refl, r)
        vals.append(res.value.conjugate())
        budget += math.comb(m, r) * chi * abs(R[m - r]) * res.error_estimate
    value = reflect_fdfe(datum, s, m, vals)
    return direct.value, abs(value - direct.value), budget


def fit_slope(ts, residuals) -> float:
    """Least-squares slope of log residual against log t."""
    x = np.log(np.abs(np.asarray(ts, dtype=float)))
    y = np.log(np.asarray(residuals, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def residual_suite(datum, grid, m_max: int = 2, modes=None, splits=DEFAULT_SPLITS,
                   slope_ts=None) -> Report:
    """Rows for every grid point and m = 0..m_max, in canonical order.

    ``grid`` is a sequence of complex points.  For zeta the sharp and
    smoothed equations are compared with the Euler-Maclaurin oracle and
    with each other; every datum gets reflection and y-split rows.
    ``slope_ts`` adds a fitted-exponent row (sigma = 1/2, m = 0) from
    sharp residuals at those heights (zeta only).
    """
    from .afe import afe_sharp, afe_smoothed, default_l, MAX_L

    zeta = is_zeta(datum)
    if modes is None:
        modes = (("sharp", "smoothed", "sharp_vs_smoothed", "fdfe", "ysplit") if zeta
                 else ("fdfe", "ysplit"))
    label = datum.label
    report = Report()
    for s in grid:
        s = complex(s)
        for m in range(m_max + 1):
            sharp = afe_sharp(datum, s, m)
            smooth = None
            if ({"smoothed", "sharp_vs_smoothed"} & set(modes)
                    and default_l(datum, m) <= MAX_L):
                smooth = afe_smoothed(datum, s, m)
            ref = euler_maclaurin_zeta(s, m) if zeta else None
            if "sharp" in modes and ref is not None:
                report.add(label, s, m, "sharp", sharp.value, abs(sharp.value - ref),
                           sharp.error_estimate)
            if "smoothed" in modes and ref is not None and smooth is not None:
                report.add(label, s, m, "smoothed", smooth.value, abs(smooth.value - ref),
                           smooth.error_estimate)
            if "sharp_vs_smoothed" in modes and smooth is not None:
                report.add(label, s, m, "sharp_vs_smoothed", smooth.value,
                           abs(smooth.value - sharp.value),
                           sharp.error_estimate + smooth.error_estimate)
            if "fdfe" in modes:
                value, res, budget = fdfe_residual(datum, s, m)
                report.add(label, s, m, "fdfe", value, res, budget)
            if "ysplit" in modes:
                for k in splits:
                    other = afe_sharp(datum, s, m, y_split=k)
                    report.add(label, s, m, f"ysplit:{k:g}", other.value,
                               abs(other.value - sharp.value),
                               other.error_estimate + sharp.error_estimate)
    if slope_ts is not None and zeta:
        res = []
        for t in slope_ts:
            s = complex(0.5, t)
            res.append(abs(afe_sharp(datum, s, 0).value - euler_maclaurin_zeta(s, 0)))
        slope = fit_slope(slope_ts, res)
        lo, hi = SLOPE_WINDOW
        report.add(label, complex(0.5, max(slope_ts)), 0, "slope", complex(slope),
                   slope, hi, ok=lo <= slope <= hi)
    return report


def default_grid(sigmas=(0.0, 0.25, 0.5, 0.75, 1.0), ts=(30.0, 60.0, 100.0, 200.0)):
    return [complex(sg, t) for t in ts for sg in sigmas]


# ---------------------------------------------------------------------------
# Calibration of the O-constants
# ---------------------------------------------------------------------------

CALIBRATION_SIGMAS = (0.0, 0.25, 0.5, 0.75, 1.0)
CALIBRATION_TS = (30.0, 60.0, 100.0, 200.0, 400.0)
CALIBRATION_SPLITS = (None, 0.25, 0.5, 2.0, 4.0)
CALIBRATION_SAFETY = 2.0


def calibrate(sigmas=CALIBRATION_SIGMAS, ts=CALIBRATION_TS, splits=CALIBRATION_SPLITS,
              safety: float = CALIBRATION_SAFETY, m_max: int = MAX_M) -> dict:
    """Measure the constants of both error budgets on zeta.

    For each mode and m the constant is ``safety`` times the largest ratio
    |engine - oracle| / (budget with constant 1) over the grid; the sharp
    equation is also run at every y-split ratio.
    """
    from .afe import MAX_L, afe_sharp, afe_smoothed, default_l, error_constant
    from .datum import builtin

    zeta = builtin("zeta")
    constants, ratios = {}, {}
    for m in range(m_max + 1):
        sharp_r, smooth_r = [], []
        smooth_ok = default_l(zeta, m) <= MAX_L
        for t in ts:
            for sigma in sigmas:
                s = complex(sigma, t)
                ref = euler_maclaurin_zeta(s, m)
                for k in splits:
                    res = afe_sharp(zeta, s, m, y_split=k)
                    raw = res.error_estimate / error_constant("sharp", m)
                    sharp_r.append(abs(res.value - ref) / raw)
                if smooth_ok:
                    res = afe_smoothed(zeta, s, m)
                    raw = res.error_estimate / error_constant("smoothed", m)
                    smooth_r.append(abs(res.value - ref) / raw)
        ratios[f"sharp:{m}"] = max(sharp_r)
        if smooth_r:
            ratios[f"smoothed:{m}"] = max(smooth_r)
    for key, r in ratios.items():
        constants[key] = float(f"{safety * r:.4g}")
    return {
        "description": "error-budget constants measured on zeta against the "
                       "Euler-Maclaurin oracle",
        "epsilon": 0.05,
        "safety": safety,
        "sigmas": list(sigmas),
        "ts": list(ts),
        "splits": [1.0 if k is None else k for k in splits],
        "max_ratio": {k: float(f"{v:.6g}") for k, v in ratios.items()},
        "constants": constants,
    }
