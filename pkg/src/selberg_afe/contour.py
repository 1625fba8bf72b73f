"""The stadium contour and the correction coefficients gamma_j^(r), delta_j^(r).

The path consists of a right semicircle about 3/2 - sigma, a top segment
at Im w = sqrt|t|, a left semicircle about -1/2 - sigma and a bottom
segment, all of radius sqrt|t|, traversed counterclockwise.

    gamma_j^(r)(s; rho) = 1/(2 pi i) int  g(s+w)/g(s) / (w (w+1) ... (w+j))
                          * (chi^(r)/chi)(1 - s - w)
                          * prod_k Gamma(lam_k (s+w) + mu_k) / Gamma(lam_k s + mu_k)
                          * (rho e^{-i pi sgn(t)/2})^(d w / 2) dw

delta_j^(r) is the same integral with g and the mu_k conjugated (the chi
ratio is still that of F).  rho = 1 / (prod lam^lam)^(2/d) / |t|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .chi import chi_log_ratios
from .errors import AccuracyError, ContourDegeneracyError, DomainError, ValidationError
from .special import log_gamma

NODES_PER_UNIT = 16
MIN_NODES = 16
QUAD_RTOL = 1e-8
MAX_REFINEMENTS = 3
MAX_J = 12


@lru_cache(maxsize=64)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class ContourSpec:
    """Stadium path for a point s = sigma + i t (radius sqrt|t|)."""

    sigma: float
    t: float
    nodes_per_unit: float = NODES_PER_UNIT
    radius_override: float | None = None

    @property
    def radius(self) -> float:
        if self.radius_override is not None:
            return self.radius_override
        return math.sqrt(abs(self.t))

    @property
    def segments(self) -> tuple:
        """(kind, parameters) in traversal order, starting at the right arc."""
        R = self.radius
        cr = 1.5 - self.sigma
        cl = -0.5 - self.sigma
        return (("arc", cr, -math.pi / 2, math.pi / 2),
                ("line", complex(cr, R), complex(cl, R)),
                ("arc", cl, math.pi / 2, 3 * math.pi / 2),
                ("line", complex(cl, -R), complex(cr, -R)))

    def piece_nodes(self, refine: int = 0):
        """Per-piece (nodes, dw weights); node counts doubled ``refine`` times."""
        R = self.radius
        out = []
        for seg in self.segments:
            if seg[0] == "arc":
                _, c, a, b = seg
                length = R * (b - a)
            else:
                _, p, q = seg
                length = abs(q - p)
            n = max(MIN_NODES, math.ceil(self.nodes_per_unit * length / math.sqrt(abs(self.t))))
            n *= 2 ** refine
            x, wts = _gauss_legendre(n)
            if seg[0] == "arc":
                theta = a + (b - a) * (x + 1) / 2
                z = c + R * np.exp(1j * theta)
                dz = 1j * R * np.exp(1j * theta) * (b - a) / 2 * wts
            else:
                z = p + (q - p) * (x + 1) / 2
                dz = (q - p) / 2 * wts
            out.append((z, dz))
        return out

    def nodes(self, refine: int = 0):
        pieces = self.piece_nodes(refine)
        return (np.concatenate([p[0] for p in pieces]),
                np.concatenate([p[1] for p in pieces]))

    def winding(self, w0: complex) -> bool:
        """True if w0 is enclosed by the path."""
        R = self.radius
        cr = 1.5 - self.sigma
        cl = -0.5 - self.sigma
        if abs(w0.imag) >= R:
            return False
        if cl <= w0.real <= cr:
            return True
        return abs(w0 - cr) < R or abs(w0 - cl) < R

    def distance(self, w0: complex) -> float:
        """Euclidean distance from w0 to the path."""
        R = self.radius
        cr = 1.5 - self.sigma
        cl = -0.5 - self.sigma
        d_top = abs(w0 - complex(min(max(w0.real, cl), cr), R))
        d_bot = abs(w0 - complex(min(max(w0.real, cl), cr), -R))
        if w0.real >= cr:
            d_arc = abs(abs(w0 - cr) - R)
        else:
            d_arc = min(abs(w0 - complex(cr, R)), abs(w0 - complex(cr, -R)))
        if w0.real <= cl:
            d_arcl = abs(abs(w0 - cl) - R)
        else:
            d_arcl = min(abs(w0 - complex(cl, R)), abs(w0 - complex(cl, -R)))
        return min(d_top, d_bot, d_arc, d_arcl)

    def spacing(self, refine: int = 0) -> float:
        z, _ = self.nodes(refine)
        return float(np.max(np.abs(np.diff(np.concatenate([z, z[:1]])))))


def rho_lemma(datum, t: float) -> float:
    """rho = 1 / ((prod lam^lam)^(2/d) |t|), the argument used for the AFE."""
    C = datum.constants
    return 1.0 / (datum.lambda_product ** (2.0 / C.d_F) * abs(t))


def _a_poly(lam, mu, nu, s):
    """A_j(s) of the regularizer (1 when Re mu > lam/2)."""
    if mu.real > lam / 2:
        return np.ones_like(s)
    out = np.ones_like(s)
    for n in range(nu + 1):
        out = out * (lam * s + mu - n)
    return out


def g_regularizer(datum, s, m: int):
    """g_F(s) = (s(1-s))^(p+m) prod_j (A_j(s) conj-A_j(1-s))^(m+1)."""
    arr = np.asarray(s, dtype=complex)
    C = datum.constants
    out = (arr * (1 - arr)) ** (C.pole_order + m)
    for lam, mu, nu in zip(datum.lambdas, datum.mus, C.nu):
        out = out * (_a_poly(lam, mu, nu, arr) * _a_poly(lam, mu.conjugate(), nu, 1 - arr)) ** (m + 1)
    return complex(out) if arr.ndim == 0 else out


def _g_ratio(datum, s: complex, w: np.ndarray, m: int) -> np.ndarray:
    """g(s+w)/g(s) as a product of factor ratios (no overflow from large powers)."""
    C = datum.constants
    sw = s + w
    out = ((sw * (1 - sw)) / (s * (1 - s))) ** (C.pole_order + m)
    for lam, mu, nu in zip(datum.lambdas, datum.mus, C.nu):
        num = _a_poly(lam, mu, nu, sw) * _a_poly(lam, mu.conjugate(), nu, 1 - sw)
        den = _a_poly(lam, mu, nu, np.array([s])) * _a_poly(lam, mu.conjugate(), nu, np.array([1 - s]))
        out = out * (num / den[0]) ** (m + 1)
    return out


def _base_integrand(datum, kernel_datum, s: complex, w: np.ndarray, m: int, rmax: int,
                    rho: float) -> np.ndarray:
    """Rows r = 0..rmax of the integrand without the 1/(w...(w+j)) factor."""
    if s * (1 - s) == 0:
        raise DomainError("g_F(s) vanishes at s", s=s)
    t = s.imag
    sgn = 1.0 if t > 0 else -1.0
    d = datum.constants.d_F
    log_common = np.zeros(w.shape, dtype=complex)
    for lam, mu in zip(kernel_datum.lambdas, kernel_datum.mus):
        log_common += log_gamma(lam * (s + w) + mu) - log_gamma(lam * s + mu)
    log_common += (d * w / 2) * (math.log(rho) - 1j * math.pi * sgn / 2)
    common = _g_ratio(kernel_datum, s, w, m) * np.exp(log_common)
    ratios = chi_log_ratios(datum, 1 - (s + w), rmax)  # shape (n, rmax+1)
    return (ratios * common[:, None]).T


def _pole_factors(w: np.ndarray, jmax: int) -> np.ndarray:
    """Rows j = 0..jmax of 1/(w (w+1) ... (w+j))."""
    out = np.empty((jmax + 1, w.size), dtype=complex)
    acc = 1 / w
    out[0] = acc
    for j in range(1, jmax + 1):
        acc = acc / (w + j)
        out[j] = acc
    return out


@dataclass(frozen=True)
class ContourCoefficients:
    values: np.ndarray  # shape (rmax+1, jmax+1)
    error: np.ndarray
    nodes: int
    contour: ContourSpec


def _residue_table(datum, kernel, s, m, jmax, rmax, rho, k) -> np.ndarray:
    """Residue at w = -k of the (r, j) integrands (zero for j < k)."""
    base = _base_integrand(datum, kernel, s, np.array([complex(-k)]), m, rmax, rho)[:, 0]
    out = np.zeros((rmax + 1, jmax + 1), dtype=complex)
    for j in range(k, jmax + 1):
        out[:, j] = base * (-1) ** k / (math.factorial(k) * math.factorial(j - k))
    return out


def contour_coefficients(datum, s, m: int, jmax: int, rmax: int, variant: str = "gamma",
                         rho: float | None = None, degenerate: str = "raise",
                         enclose_all: bool = False) -> ContourCoefficients:
    """All gamma_j^(r) (or delta_j^(r)) for j <= jmax, r <= rmax at the point s.

    ``m`` selects the regularizer g_F of F^(m).  The value is accepted when
    doubling the nodes changes it by at most 1e-8 relative to the largest
    coefficient of the same r (up to three doublings).

    A pole w = -k closer to the path than the node spacing raises
    :class:`ContourDegeneracyError` unless ``degenerate="deform"``: the
    integral is then taken over a wider stadium and the residues of the
    poles that the original path leaves outside are subtracted, which
    gives the same value by Cauchy's theorem.  ``enclose_all`` keeps every
    pole w = 0..-jmax inside (adds the residues the path misses).
    """
    s = complex(s)
    if variant not in ("gamma", "delta"):
        raise ValidationError("variant", f"expected gamma or delta, got {variant!r}")
    if degenerate not in ("raise", "deform"):
        raise ValidationError("degenerate", f"expected raise or deform, got {degenerate!r}")
    if abs(s.imag) < 10:
        raise DomainError(f"contour coefficients need |t| >= 10, got {s.imag}", t=s.imag)
    if not 0 <= jmax <= MAX_J:
        raise ValidationError("j", f"must lie in [0, {MAX_J}]")
    kernel = datum if variant == "gamma" else datum.conjugate()
    rho = rho_lemma(datum, s.imag) if rho is None else rho
    spec = ContourSpec(s.real, s.imag)
    h = spec.spacing()
    near = [k for k in range(jmax + 1) if spec.distance(complex(-k)) < h]
    if near and degenerate == "raise" and not enclose_all:
        k = near[0]
        raise ContourDegeneracyError(
            f"pole w = {-k} lies within node spacing {h:.3g} of the contour; "
            "use a larger |t|", pole=-k, t=s.imag, spacing=h)

    path = spec
    if near or enclose_all:
        # every pole strictly inside and at least one spacing from the path
        R = max(spec.radius, jmax + 0.5 + spec.sigma + 2 * h) + 2 * h
        path = ContourSpec(s.real, s.imag, radius_override=R)
    adjust = np.zeros((rmax + 1, jmax + 1), dtype=complex)
    if path is not spec and not enclose_all:
        for k in range(jmax + 1):
            if not spec.winding(complex(-k)):
                adjust -= _residue_table(datum, kernel, s, m, jmax, rmax, rho, k)

    def evaluate(refine):
        z, dz = path.nodes(refine)
        base = _base_integrand(datum, kernel, s, z, m, rmax, rho)
        poles = _pole_factors(z, jmax)
        # (r, j) = sum over nodes of base[r] * poles[j] * dz / (2 pi i)
        return np.einsum("rn,jn,n->rj", base, poles, dz) / (2j * math.pi) + adjust

    coarse = evaluate(0)
    for refine in range(1, MAX_REFINEMENTS + 1):
        fine = evaluate(refine)
        err = np.abs(fine - coarse)
        scale = np.max(np.abs(fine), axis=1, keepdims=True)
        scale = np.where(scale > 0, scale, 1.0)
        if np.all(err <= QUAD_RTOL * scale):
            return ContourCoefficients(fine, err, path.nodes(refine)[0].size, path)
        coarse = fine
    raise AccuracyError(
        f"contour quadrature did not reach {QUAD_RTOL:g} after {MAX_REFINEMENTS} doublings",
        achieved=float(np.max(err / scale)))


def gamma_delta_coeff(datum, s, j: int, r: int, variant: str = "gamma", m: int = 0,
                      rho: float | None = None) -> complex:
    """Single coefficient gamma_j^(r)(s; rho) or delta_j^(r)(s; rho)."""
    if int(j) != j or j < 0:
        raise ValidationError("j", "must be a nonnegative integer")
    if int(r) != r or r < 0:
        raise ValidationError("r", "must be a nonnegative integer")
    res = contour_coefficients(datum, s, m, int(j), int(r), variant, rho)
    return complex(res.values[r, j])


def residue_sum(datum, s, j: int, r: int, variant: str = "gamma", m: int = 0,
                rho: float | None = None) -> complex:
    """Sum of the residues at the enclosed poles w = 0, -1, ..., -j (test oracle).

    At w = -k the pole factor has residue (-1)^k / (k! (j-k)!).
    """
    s = complex(s)
    kernel = datum if variant == "gamma" else datum.conjugate()
    rho = rho_lemma(datum, s.imag) if rho is None else rho
    spec = ContourSpec(s.real, s.imag)
    total = 0j
    for k in range(j + 1):
        if not spec.winding(complex(-k)):
            continue
        w = np.array([complex(-k)])
        if k == 0:
            # g ratio and Gamma ratio equal 1 at w = 0 exactly
            val = chi_log_ratios(datum, 1 - s, r)[0, r]
        else:
            val = _base_integrand(datum, kernel, s, w, m, r, rho)[r, 0]
        total += val * (-1) ** k / (math.factorial(k) * math.factorial(j - k))
    return total
