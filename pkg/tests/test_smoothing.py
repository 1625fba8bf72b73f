import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from selberg_afe.errors import DomainError, SmoothnessError, ValidationError
from selberg_afe.smoothing import (MAX_DERIVATIVE, base_bump, make_phi_0alpha, make_phi_alpha,
                                   mellin_K, sharp_cutoff, step)


@pytest.fixture(scope="module")
def phi():
    return base_bump()


def _mp_step(x):
    h = lambda y: mpmath.exp(-1 / y) if y > 0 else mpmath.mpf(0)
    return h(x) / (h(x) + h(1 - x))


def test_flat_regions(phi):
    # [TRIVIAL]
    assert phi(0.25) == 1.0
    assert phi(0.5) == 1.0
    assert phi(3.0) == 0.0
    assert phi(2.0) == 0.0
    x = np.linspace(0.5, 2, 500)
    assert np.all(np.diff(phi(x)) <= 0)


def test_total_variation(phi):
    # [DERIVED] monotone from 1 to 0
    assert phi.l1_norm(1) == pytest.approx(1.0, abs=1e-12)


def test_known_norms(phi):
    # the step S is odd about 1/2, so ||S''||_1 = 2 |S'(1/2)| = 4 on the unit interval;
    # rescaling by 3/2 gives ||phi''||_1 = 4 / 1.5
    assert phi.l1_norm(2) == pytest.approx(8 / 3, rel=1e-10)


def test_derivatives_against_mpmath():
    with mpmath.workdps(40):
        for x in (0.05, 0.3, 0.5, 0.71, 0.97):
            for k in (0, 1, 2, 5, 9, 13):
                ref = float(mpmath.diff(_mp_step, mpmath.mpf(x), k))
                tol = 1e-12 if k <= 5 else 1e-8
                assert abs(step(x, k) - ref) <= tol * max(1.0, abs(ref))


def test_derivative_orders(phi):
    assert MAX_DERIVATIVE >= 13
    with pytest.raises(ValidationError):
        phi.eval(MAX_DERIVATIVE + 1, 1.0)
    xi = sharp_cutoff()
    with pytest.raises(SmoothnessError):
        xi.eval(1, 0.5)
    assert xi(0.9) == 1.0 and xi(1.1) == 0.0


def test_dual_member(phi):
    d = phi.dual()
    assert d.support == pytest.approx((0.5, 2.0))
    x = np.linspace(0.01, 5, 1000)
    assert np.allclose(d(x), 1 - phi(1 / x), atol=1e-15, rtol=0)
    assert d(0.25) == 1.0 and d(3.0) == 0.0


def test_dual_involution(phi):
    dd = phi.dual().dual()
    x = np.linspace(0.01, 5, 1000)
    assert np.max(np.abs(dd(x) - phi(x))) <= 1e-12
    for j in (1, 3):
        assert np.max(np.abs(dd.eval(j, x) - phi.eval(j, x))) <= 1e-9


def test_dual_derivatives(phi):
    d = phi.dual()
    x = np.linspace(0.55, 1.95, 15)
    h = 1e-5
    fd = (d(x + h) - d(x - h)) / (2 * h)
    assert np.allclose(d.eval(1, x), fd, atol=1e-8)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.45])
@pytest.mark.parametrize("t", [100.0, 1000.0])
def test_phi_alpha_support(phi, alpha, t):
    # [PAPER] phi_alpha = 1 up to 1 - 1/(2T), 0 from 1 + 1/T, derivatives exactly zero
    pa = make_phi_alpha(phi, alpha, t)
    T = t ** alpha
    lo, hi = 1 - 1 / (2 * T), 1 + 1 / T
    assert pa.support == (lo, hi)
    left = np.linspace(0, lo, 400)
    right = np.linspace(hi, 10, 400)
    assert np.all(pa(left) == 1.0)
    assert np.all(pa(right) == 0.0)
    for j in range(1, 8):
        assert np.all(pa.eval(j, left) == 0.0)
        assert np.all(pa.eval(j, right) == 0.0)
    x = np.linspace(lo, hi, 50)
    assert np.allclose(pa(x), phi(1 + (x - 1) * T), rtol=0, atol=0)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.45])
def test_phi_0alpha_support(phi, alpha):
    # the dual lives on [1/(1 + 1/T), 1/(1 - 1/(2T))]
    t = 500.0
    T = t ** alpha
    p0 = make_phi_0alpha(phi, alpha, t)
    lo, hi = 1 / (1 + 1 / T), 1 / (1 - 1 / (2 * T))
    assert p0.support == pytest.approx((lo, hi), rel=1e-15)
    assert np.all(p0(np.linspace(0, lo, 200)) == 1.0)
    assert np.all(p0(np.linspace(hi, 5, 200)) == 0.0)
    assert np.all(p0.eval(2, np.linspace(hi, 5, 200)) == 0.0)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.45])
def test_phi_alpha_norm_growth(phi, alpha):
    # [DERIVED] ||phi_alpha^(j)||_1 / |t|^(alpha (j-1)) within a factor 4 over t
    for j in (1, 2, 3, 5):
        r = [make_phi_alpha(phi, alpha, t).l1_norm(j) / t ** (alpha * (j - 1))
             for t in (100.0, 1000.0)]
        assert max(r) <= 4 * min(r)


def test_phi_alpha_errors(phi):
    with pytest.raises(ValidationError):
        make_phi_alpha(phi, 0.6, 100)
    with pytest.raises(DomainError):
        make_phi_alpha(phi, 0.3, 5)
    with pytest.raises(SmoothnessError):
        make_phi_alpha(sharp_cutoff(), 0.3, 100)


def test_k_at_zero(phi):
    # [PAPER]
    assert abs(mellin_K(phi, 0) - 1) <= 1e-10
    assert abs(mellin_K(phi.dual(), 0) - 1) <= 1e-10


def test_k_sharp():
    # [TRIVIAL]
    assert mellin_K(sharp_cutoff(), 0.5 + 3j) == 1
    with pytest.raises(SmoothnessError):
        mellin_K(sharp_cutoff(), -0.5)


def test_k_defining_integral(phi):
    for w in (0.5, 1.3 + 4j, 2 - 7j):
        f = lambda x, part: (phi(x) * x ** (w - 1)).real if part == 0 else \
            (phi(x) * x ** (w - 1)).imag
        re = integrate.quad(f, 0, 2, args=(0,), limit=200, epsabs=1e-13)[0]
        im = integrate.quad(f, 0, 2, args=(1,), limit=200, epsabs=1e-13)[0]
        assert abs(mellin_K(phi, w) - w * complex(re, im)) <= 1e-9


def test_k_functional_equation(phi, rng):
    # [PAPER] K_phi(w) = K_phi0(-w)
    d = phi.dual()
    ws = rng.uniform(-2, 2, 20) + 1j * rng.uniform(-30, 30, 20)
    for w in ws:
        assert abs(mellin_K(phi, w) - mellin_K(d, -w)) <= 1e-9


def test_k_order_consistency(phi, rng):
    ws = list(rng.uniform(-2, 2, 8) + 1j * rng.uniform(-20, 20, 8)) + [0.5, -0.5 + 3j]
    for w in ws:
        vals = [mellin_K(phi, w, l) for l in range(6)]
        for a, b in zip(vals, vals[1:]):
            assert abs(a - b) <= 1e-10 * max(1, abs(a))


def test_k_prefactor_pole(phi):
    # at w = -1 the order is lowered; K stays finite and matches l = 0
    assert abs(mellin_K(phi, -1.0, 3) - mellin_K(phi, -1.0, 0)) <= 1e-12
    assert math.isfinite(abs(mellin_K(phi, -2.0, 4)))
