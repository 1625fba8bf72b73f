"""Selberg-class functional-equation data and Dirichlet coefficients.

A :class:`SelbergDatum` fixes the completed function

    Phi(s) = Q^s prod_j Gamma(lambda_j s + mu_j) F(s),   Phi(s) = omega * conj(Phi(1 - conj s)),

and carries a :class:`CoefficientSource` producing a_F(n).  Built-in data
are the Riemann zeta function, the L-function of the discriminant cusp form
Delta (weight 12) and the Rankin-Selberg product of Delta with itself.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import CoefficientRangeError, ValidationError

OMEGA_TOL = 1e-14
MAX_TAU_TERMS = 100_000

COEFF_KINDS = ("zeta", "cusp_form_delta", "rankin_selberg", "user_table")


# ---------------------------------------------------------------------------
# Ramanujan tau by exact integer power-series arithmetic
# ---------------------------------------------------------------------------


class _TauTable:
    """Exact tau(n) from Delta = q * prod(1 - q^n)^24.

    Uses Jacobi's identity prod(1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}
    and the power-series power recurrence for B = A^8,
    n b_n = sum_i (9 i - n) a_i b_{n-i}, which only visits the O(sqrt n)
    triangular exponents where A is nonzero.
    """

    def __init__(self):
        self._b = [1]  # coefficients of prod(1-q^n)^24
        self._lock = threading.Lock()

    def _jacobi_terms(self, n):
        k = 0
        out = []
        while k * (k + 1) // 2 <= n:
            out.append((k * (k + 1) // 2, (-1) ** k * (2 * k + 1)))
            k += 1
        return out[1:]  # drop the constant term a_0 = 1

    def tau(self, n_max: int) -> list[int]:
        """Return [tau(1), ..., tau(n_max)]."""
        if n_max > MAX_TAU_TERMS:
            raise CoefficientRangeError(
                f"tau table limited to n <= {MAX_TAU_TERMS}", required=n_max,
                available=MAX_TAU_TERMS)
        with self._lock:
            b = self._b
            need = n_max  # tau(n) = b[n-1]
            if len(b) < need:
                terms = self._jacobi_terms(need)
                for n in range(len(b), need):
                    acc = 0
                    for i, a in terms:
                        if i > n:
                            break
                        acc += (9 * i - n) * a * b[n - i]
                    value, rem = divmod(acc, n)
                    assert rem == 0
                    b.append(value)
            return b[:need]


_TAU = _TauTable()


def ramanujan_tau(n_max: int) -> list[int]:
    """Exact Ramanujan tau values tau(1..n_max)."""
    return _TAU.tau(n_max)


# ---------------------------------------------------------------------------
# Coefficient sources
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class CoefficientSource:
    """Lazily generated, cached Dirichlet coefficients a_F(1), a_F(2), ...

    ``kind`` is one of ``zeta``, ``cusp_form_delta``, ``rankin_selberg`` and
    ``user_table``.  For ``rankin_selberg`` the coefficients are
    lambda_Delta(n) * conj(lambda_Delta(n)); ``zeta2s=True`` additionally
    convolves with zeta(2s), which is what makes the product a genuine
    member of the Selberg class.
    """

    kind: str
    table: np.ndarray | None = None
    growth_epsilon: float = 0.3
    zeta2s: bool = False
    _cache: np.ndarray = field(default_factory=lambda: np.zeros(0, complex), repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.kind not in COEFF_KINDS:
            raise ValidationError("coeffs", f"unknown coefficient kind {self.kind!r}")
        if self.kind == "user_table":
            if self.table is None:
                raise ValidationError("coeffs", "user_table requires a table")
            self.table = np.asarray(self.table, dtype=complex)
            if self.table.ndim != 1 or self.table.size == 0:
                raise ValidationError("coeffs", "coefficient table is empty")

    @property
    def is_real(self) -> bool:
        if self.kind == "user_table":
            return bool(np.all(self.table.imag == 0))
        return True

    def _generate(self, n_max: int) -> np.ndarray:
        if self.kind == "zeta":
            return np.ones(n_max, dtype=complex)
        if self.kind == "user_table":
            if self.table.size < n_max:
                raise CoefficientRangeError(
                    f"coefficient table has {self.table.size} rows, {n_max} required",
                    required=n_max, available=int(self.table.size))
            return self.table[:n_max].copy()
        lam = _delta_normalized(n_max)
        if self.kind == "cusp_form_delta":
            return lam.astype(complex)
        a = (lam * np.conj(lam)).astype(complex)
        if self.zeta2s:
            out = a.copy()
            d = 2
            while d * d <= n_max:
                sq = d * d
                # b(n) = sum_{d^2 | n} a(n / d^2)
                out[sq - 1::sq] += a[: n_max // sq]
                d += 1
            a = out
        return a

    def coefficients(self, n_max: int) -> np.ndarray:
        """Return a_F(1..n_max) as a complex array (a read-only view)."""
        if n_max < 1:
            raise ValidationError("n_max", "must be >= 1")
        with self._lock:
            if self._cache.size < n_max:
                grown = self._generate(max(n_max, 2 * self._cache.size))  \
                    if self.kind != "user_table" else self._generate(n_max)
                grown.setflags(write=False)
                self._cache = grown
            out = self._cache[:n_max]
        return out

    def conjugate(self) -> "CoefficientSource":
        if self.is_real:
            return self
        return CoefficientSource("user_table", table=np.conj(self.table),
                                 growth_epsilon=self.growth_epsilon)

    def describe(self) -> str:
        if self.kind == "rankin_selberg" and self.zeta2s:
            return "rankin_selberg+zeta2s"
        return self.kind


def _delta_normalized(n_max: int) -> np.ndarray:
    tau = ramanujan_tau(n_max)
    n = np.arange(1, n_max + 1, dtype=float)
    # tau(n) exceeds 2^53 for large n; convert through Python floats
    return np.array([float(x) for x in tau]) / n ** 5.5


# ---------------------------------------------------------------------------
# The datum and its derived constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivedConstants:
    d_F: float
    e_F: float
    C_F: float
    C_F_prime: float
    f_F: int
    nu: tuple[int, ...]
    q: int
    pole_order: int

    def M_F(self, m: int) -> float:
        """Lower bound for the smoothing order l (l must exceed it)."""
        return (3 * self.d_F / 4 + (self.e_F - self.q) / 2
                + 2 * (self.pole_order + m) + (m + 1) * self.f_F)


@dataclass(frozen=True)
class SelbergDatum:
    q: int
    Q: float
    lambdas: tuple[float, ...]
    mus: tuple[complex, ...]
    omega: complex
    pole_order: int
    coeff_source: CoefficientSource
    label: str = "F"

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        object.__setattr__(self, "mus", tuple(complex(x) for x in self.mus))
        object.__setattr__(self, "omega", complex(self.omega))
        if not isinstance(self.q, (int, np.integer)) or self.q < 1:
            raise ValidationError("q", "must be a positive integer")
        if len(self.lambdas) != self.q:
            raise ValidationError("lambda", f"expected {self.q} entries, got {len(self.lambdas)}")
        if len(self.mus) != self.q:
            raise ValidationError("mu", f"expected {self.q} entries, got {len(self.mus)}")
        if not (math.isfinite(self.Q) and self.Q > 0):
            raise ValidationError("Q", "must be a positive real")
        for lam in self.lambdas:
            if not (math.isfinite(lam) and lam > 0):
                raise ValidationError("lambda", f"entries must be positive, got {lam}")
        for mu in self.mus:
            if not (np.isfinite(mu) and mu.real >= 0):
                raise ValidationError("mu", f"entries need Re mu >= 0, got {mu}")
        if abs(abs(self.omega) - 1) > OMEGA_TOL:
            raise ValidationError("omega", f"|omega| must be 1, got {abs(self.omega)!r}")
        if not isinstance(self.pole_order, (int, np.integer)) or self.pole_order < 0:
            raise ValidationError("pole_order", "must be a nonnegative integer")

    @cached_property
    def constants(self) -> DerivedConstants:
        return derived_constants(self)

    @property
    def lambda_product(self) -> float:
        return math.prod(lam ** lam for lam in self.lambdas)

    @property
    def is_real(self) -> bool:
        """True when the datum equals its conjugate datum F-bar."""
        return (all(mu.imag == 0 for mu in self.mus) and self.omega.imag == 0
                and self.coeff_source.is_real)

    def coefficients(self, n_max: int) -> np.ndarray:
        return self.coeff_source.coefficients(n_max)

    def conjugate(self) -> "SelbergDatum":
        """The datum of F-bar(s) = conj(F(conj s))."""
        return SelbergDatum(
            q=self.q, Q=self.Q, lambdas=self.lambdas,
            mus=tuple(mu.conjugate() for mu in self.mus),
            omega=self.omega.conjugate(), pole_order=self.pole_order,
            coeff_source=self.coeff_source.conjugate(), label=self.label + "_bar")


def derived_constants(datum: SelbergDatum) -> DerivedConstants:
    lam = datum.lambdas
    mus = datum.mus
    d_F = 2 * sum(lam)
    e_F = 2 * sum(mu.real for mu in mus)
    lp = math.prod(x ** x for x in lam)
    C_F = (datum.Q * lp) ** 2
    C_F_prime = (datum.Q * math.prod(x ** (x + mu.imag) for x, mu in zip(lam, mus))) ** 2
    nu = tuple(0 if mu.real > x / 2 else math.floor(x / 2 - mu.real)
               for x, mu in zip(lam, mus))
    f_F = 2 * sum(max(0, math.floor(x / 2 - mu.real)) for x, mu in zip(lam, mus))
    return DerivedConstants(d_F=d_F, e_F=e_F, C_F=C_F, C_F_prime=C_F_prime,
                            f_F=f_F, nu=nu, q=datum.q, pole_order=datum.pole_order)


def coefficients(src: CoefficientSource, n_max: int) -> np.ndarray:
    return src.coefficients(n_max)


# ---------------------------------------------------------------------------
# Built-in catalog
# ---------------------------------------------------------------------------


def zeta_datum() -> SelbergDatum:
    return SelbergDatum(q=1, Q=math.pi ** -0.5, lambdas=(0.5,), mus=(0j,), omega=1,
                        pole_order=1, coeff_source=CoefficientSource("zeta"), label="zeta")


def delta_datum() -> SelbergDatum:
    return SelbergDatum(q=1, Q=1 / (2 * math.pi), lambdas=(1.0,), mus=(5.5 + 0j,), omega=1,
                        pole_order=0, coeff_source=CoefficientSource("cusp_form_delta"),
                        label="delta")


def rankin_selberg_delta_datum(zeta2s: bool = False) -> SelbergDatum:
    k = 12
    return SelbergDatum(
        q=2, Q=(2 * math.pi) ** -2, lambdas=(1.0, 1.0), mus=(0j, complex(k - 1)), omega=1,
        pole_order=1,
        coeff_source=CoefficientSource("rankin_selberg", zeta2s=zeta2s),
        label="rankin_selberg_delta_full" if zeta2s else "rankin_selberg_delta")


_BUILTINS = {
    "zeta": zeta_datum,
    "delta": delta_datum,
    "cusp_form_delta": delta_datum,
    "rankin_selberg_delta": rankin_selberg_delta_datum,
    "rankin_selberg_delta_full": lambda: rankin_selberg_delta_datum(zeta2s=True),
}

_builtin_cache: dict[str, SelbergDatum] = {}
_builtin_lock = threading.Lock()


def builtin_labels() -> list[str]:
    return ["zeta", "delta", "rankin_selberg_delta", "rankin_selberg_delta_full"]


def builtin(label: str) -> SelbergDatum:
    """Return a shared (immutable) built-in datum by label."""
    try:
        factory = _BUILTINS[label]
    except KeyError:
        raise ValidationError("datum", f"unknown built-in datum {label!r}") from None
    with _builtin_lock:
        if label not in _builtin_cache:
            _builtin_cache[label] = factory()
        return _builtin_cache[label]


def make_datum(lambdas: Sequence[float], mus: Sequence[complex], Q: float,
               omega: complex = 1, pole_order: int = 0,
               coeff_source: CoefficientSource | None = None, label: str = "F") -> SelbergDatum:
    return SelbergDatum(q=len(lambdas), Q=Q, lambdas=tuple(lambdas), mus=tuple(mus),
                        omega=omega, pole_order=pole_order,
                        coeff_source=coeff_source or CoefficientSource("zeta"), label=label)
