"""Smooth cutoffs phi with phi = 1 on [0, 1/2] and phi = 0 on [2, oo).

The concrete member is built from h(x) = exp(-1/x):

    S(x)   = h(x) / (h(x) + h(1 - x)),      0 < x < 1
    phi(p) = 1 - S((p - 1/2) / 1.5)

h^(k)(x) = P_k(1/x) h(x) with P_0 = 1, P_{k+1}(y) = y^2 (P_k(y) - P_k'(y)),
and the derivatives of S follow from Leibniz's rule applied to S D = h.
Rescaled members phi_alpha and the dual phi_0(p) = 1 - phi(1/p) reuse the
same derivative tables, so every derivative is closed form.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import optimize

from .errors import DomainError, SmoothnessError, ValidationError

MAX_DERIVATIVE = 13
_X_MIN = 1.0 / 1400.0  # h(x) and all its derivatives underflow below this


@lru_cache(maxsize=None)
def _h_polys(kmax: int) -> tuple[np.ndarray, ...]:
    polys = [np.array([1.0])]
    for _ in range(kmax):
        p = polys[-1]
        dp = P.polyder(p) if p.size > 1 else np.array([0.0])
        polys.append(P.polymulx(P.polymulx(P.polysub(p, dp))))
    return tuple(polys)


def _h_derivs(x: np.ndarray, kmax: int) -> np.ndarray:
    """Rows h^(k)(x), k = 0..kmax, for x > 0 (zero below the underflow cut)."""
    out = np.zeros((kmax + 1, x.size))
    ok = x > _X_MIN
    if not ok.any():
        return out
    y = 1.0 / x[ok]
    logy = np.log(y)
    for k, poly in enumerate(_h_polys(kmax)):
        acc = np.zeros(y.size)
        for i, c in enumerate(poly):
            if c:
                acc += c * np.exp(i * logy - y)
        out[k, ok] = acc
    return out


def _step_derivs(x: np.ndarray, kmax: int) -> np.ndarray:
    """Rows S^(k)(x), k = 0..kmax, for 0 < x <= 1/2."""
    hx = _h_derivs(x, kmax)
    h1 = _h_derivs(1.0 - x, kmax)
    sign = (-1.0) ** np.arange(kmax + 1)
    D = hx + sign[:, None] * h1
    S = np.empty_like(hx)
    for k in range(kmax + 1):
        acc = hx[k].copy()
        for i in range(k):
            acc -= math.comb(k, i) * S[i] * D[k - i]
        S[k] = acc / D[0]
    return S


def step(x, k: int = 0) -> np.ndarray:
    """k-th derivative of the smooth step S (0 left of 0, 1 right of 1)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    flat, res = x.ravel(), out.ravel()
    if k == 0:
        res[flat >= 1] = 1.0
    lo = (flat > 0) & (flat <= 0.5)
    hi = (flat > 0.5) & (flat < 1)
    if lo.any():
        res[lo] = _step_derivs(flat[lo], k)[k]
    if hi.any():
        # S(x) = 1 - S(1 - x) keeps the evaluation on the well-conditioned half
        v = _step_derivs(1.0 - flat[hi], k)[k]
        res[hi] = 1.0 - v if k == 0 else (-1.0) ** (k + 1) * v
    return res.reshape(x.shape)


_GL32 = np.polynomial.legendre.leggauss(32)


def _abs_integral(f, lo: float, hi: float, grid: int = 4001) -> float:
    """int_lo^hi |f| for smooth f: split at sign changes, Gauss-Legendre per piece."""
    x = np.linspace(lo, hi, grid)
    y = f(x)
    sg = np.sign(y)
    cuts = [lo]
    for i in range(1, grid - 1):
        if sg[i] == 0 and sg[i - 1] * sg[i + 1] < 0:
            cuts.append(x[i])
        elif sg[i] * sg[i + 1] < 0:
            cuts.append(optimize.brentq(lambda u: float(f(np.array([u]))[0]), x[i], x[i + 1],
                                        xtol=1e-15, rtol=1e-15))
    cuts.append(hi)
    nodes, weights = _GL32
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        edges = np.linspace(a, b, 9)
        mids = (edges[:-1] + edges[1:]) / 2
        halves = (edges[1:] - edges[:-1]) / 2
        pts = (mids[:, None] + halves[:, None] * nodes[None, :]).ravel()
        vals = f(pts).reshape(8, -1)
        total += abs(float(np.sum(halves * (vals @ weights))))
    return total


def _lah(n: int, k: int) -> int:
    return math.comb(n - 1, k - 1) * math.factorial(n) // math.factorial(k)


class SmoothingFunction:
    """A cutoff equal to ``left`` below ``support[0]`` and ``right`` above ``support[1]``.

    ``deriv(j, p)`` must return phi^(j) for p inside the support; outside
    the support values are exact constants and all derivatives are exact
    zeros.
    """

    def __init__(self, deriv, support, name, alpha=None, t=None, is_sharp=False,
                 left=1.0, right=0.0, parent=None):
        self._deriv = deriv
        self.support = (float(support[0]), float(support[1]))
        self.name = name
        self.alpha = alpha
        self.t = t
        self.is_sharp = is_sharp
        self.left = left
        self.right = right
        self.parent = parent
        self._norms: dict[int, float] = {}
        self._dual = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"SmoothingFunction({self.name}, support={self.support})"

    def eval(self, j: int, rho):
        """phi^(j)(rho) for rho >= 0 (scalar or array)."""
        if j < 0 or j > MAX_DERIVATIVE:
            raise ValidationError("j", f"derivative order must be in [0, {MAX_DERIVATIVE}]")
        if self.is_sharp and j > 0:
            raise SmoothnessError("the sharp cutoff has no derivatives")
        rho = np.asarray(rho, dtype=float)
        flat = rho.ravel()
        out = np.zeros(flat.shape)
        lo, hi = self.support
        if j == 0:
            out[flat <= lo] = self.left
            out[flat >= hi] = self.right
        inside = (flat > lo) & (flat < hi)
        if inside.any() and not self.is_sharp:
            out[inside] = self._deriv(j, flat[inside])
        out = out.reshape(rho.shape)
        return float(out) if rho.ndim == 0 else out

    __call__ = lambda self, rho: self.eval(0, rho)

    def l1_norm(self, j: int) -> float:
        """||phi^(j)||_1 over [0, oo); memoized."""
        with self._lock:
            if j in self._norms:
                return self._norms[j]
        if self.is_sharp:
            if j > 0:
                raise SmoothnessError("the sharp cutoff has no derivatives")
            val = 1.0
        else:
            lo, hi = self.support
            if j == 0 and self.right != 0:
                raise DomainError("phi does not vanish at infinity; ||phi||_1 diverges")
            val = _abs_integral(lambda x: self.eval(j, x), lo, hi)
            if j == 0:
                val += lo * abs(self.left)
        with self._lock:
            self._norms[j] = val
        return val

    def dual(self) -> "SmoothingFunction":
        """phi_0(rho) = 1 - phi(1/rho)."""
        if self.is_sharp:
            return sharp_cutoff()
        with self._lock:
            if self._dual is not None:
                return self._dual
        lo, hi = self.support
        phi = self

        def deriv(n, rho):
            inv = 1.0 / rho
            if n == 0:
                return 1.0 - phi.eval(0, inv)
            acc = np.zeros(rho.shape)
            for k in range(1, n + 1):
                acc += _lah(n, k) * rho ** (-n - k) * phi.eval(k, inv)
            return -((-1.0) ** n) * acc

        dual = SmoothingFunction(deriv, (1.0 / hi, 1.0 / lo if lo > 0 else np.inf),
                                 name=f"dual({self.name})", alpha=self.alpha, t=self.t,
                                 left=1.0 - self.right, right=1.0 - self.left, parent=self)
        with self._lock:
            if self._dual is None:
                self._dual = dual
            return self._dual


_BUMP = None
_BUMP_LOCK = threading.Lock()


def base_bump() -> SmoothingFunction:
    """phi(rho) = 1 - S((rho - 1/2)/1.5), shared instance."""
    global _BUMP
    with _BUMP_LOCK:
        if _BUMP is None:
            def deriv(j, rho):
                x = (rho - 0.5) / 1.5
                if j == 0:
                    return 1.0 - step(x, 0)
                return -(1.0 / 1.5) ** j * step(x, j)

            _BUMP = SmoothingFunction(deriv, (0.5, 2.0), name="bump")
        return _BUMP


def sharp_cutoff() -> SmoothingFunction:
    """xi = 1 on [0, 1], 0 beyond."""
    return SmoothingFunction(lambda j, r: np.zeros(r.shape), (1.0, 1.0), name="xi",
                             is_sharp=True)


def make_phi_alpha(phi: SmoothingFunction, alpha: float, t: float) -> SmoothingFunction:
    """phi_alpha(rho) = phi(1 + (rho - 1)|t|^alpha) between 1 - 1/(2T) and 1 + 1/T."""
    if phi.is_sharp:
        raise SmoothnessError("phi_alpha needs a smooth phi")
    if not 0 <= alpha <= 0.5:
        raise ValidationError("alpha", f"must lie in [0, 1/2], got {alpha}")
    if abs(t) < 10:
        raise DomainError(f"phi_alpha needs |t| >= 10, got {t}", t=t)
    if phi.support != (0.5, 2.0) or phi.left != 1.0 or phi.right != 0.0:
        raise ValidationError("phi", "phi_alpha is defined for members with support [1/2, 2]")
    T = abs(t) ** alpha

    def deriv(j, rho):
        return T ** j * phi.eval(j, 1.0 + (rho - 1.0) * T)

    return SmoothingFunction(deriv, (1.0 - 1.0 / (2 * T), 1.0 + 1.0 / T),
                             name=f"{phi.name}_alpha{alpha:g}", alpha=alpha, t=t, parent=phi)


def make_phi_0alpha(phi: SmoothingFunction, alpha: float, t: float) -> SmoothingFunction:
    """phi_0alpha(rho) = 1 - phi_alpha(1/rho)."""
    return make_phi_alpha(phi, alpha, t).dual()


# ---------------------------------------------------------------------------
# Mellin transform
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _panel_quad(f, a: float, b: float, panels: int) -> complex:
    edges = np.linspace(a, b, panels + 1)
    total = 0j
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = (hi - lo) / 2
        x = lo + half * (_GL_NODES + 1)
        total += half * np.dot(_GL_WEIGHTS, f(x))
    return total


def mellin_K(phi: SmoothingFunction, w: complex, l: int = 2) -> complex:
    """K_phi(w) = w int_0^oo phi(rho) rho^(w-1) drho, continued to all w.

    Uses the integration-by-parts form

        K_phi(w) = (-1)^(l+1) / ((w+1)...(w+l)) int phi^(l+1)(rho) rho^(w+l) drho

    over the transition region of phi; if w sits on a zero of the
    prefactor's denominator, l is lowered until it does not.
    """
    w = complex(w)
    if phi.is_sharp:
        if w.real > 0:
            return 1.0 + 0j
        raise SmoothnessError("K_xi is only defined for Re w > 0")
    if int(l) != l or l < 0 or l + 1 > MAX_DERIVATIVE:
        raise ValidationError("l", f"must be an integer in [0, {MAX_DERIVATIVE - 1}]")
    l = int(l)
    for k in range(1, l + 1):
        if abs(w + k) < 1e-6:
            l = k - 1
            break
    lo, hi = phi.support
    if not np.isfinite(hi) or lo <= 0:
        raise DomainError("support must be a compact subset of (0, oo)")
    denom = 1.0 + 0j
    for k in range(1, l + 1):
        denom *= w + k
    panels = max(24 + 4 * l, int(math.ceil(abs(w.imag) * math.log(hi / lo) / 2)))
    integral = _panel_quad(lambda x: phi.eval(l + 1, x) * np.exp((w + l) * np.log(x)),
                           lo, hi, panels)
    return (-1) ** (l + 1) * integral / denom
