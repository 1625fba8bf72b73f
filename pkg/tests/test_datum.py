import math

import numpy as np
import pytest

from selberg_afe.datum import (CoefficientSource, SelbergDatum, builtin, coefficients,
                               derived_constants, make_datum, ramanujan_tau)
from selberg_afe.errors import CoefficientRangeError, ValidationError

TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_zeta_constants(zeta):
    # [DERIVED] closed forms: d = 2 * 1/2, C_F = (pi^-1/2 (1/2)^(1/2))^2 = 1/(2 pi),
    # f_F = 2 max(0, floor(1/4)) = 0
    C = derived_constants(zeta)
    assert C.d_F == 1.0
    assert C.C_F == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    assert C.e_F == 0.0
    assert C.f_F == 0
    assert C.nu == (0,)
    assert C.M_F(0) == pytest.approx(2.25)


def test_rankin_selberg_degree(rs):
    # [PAPER] degree 4 so the sharp error exponent is 3/2 - 2 sigma
    C = rs.constants
    assert C.d_F == 4.0
    sigma = 0.3
    assert C.d_F / 2 * (1 - sigma) - 0.5 == pytest.approx(1.5 - 2 * sigma)
    assert C.C_F == pytest.approx((2 * math.pi) ** -4, rel=1e-14)


def test_half_lambda_degree_one():
    # [TRIVIAL] d_F = 2 sum lambda
    d = make_datum([0.5], [0.3], Q=1.0)
    assert d.constants.d_F == 1.0


def test_delta_constants(delta):
    C = delta.constants
    assert C.d_F == 2.0
    assert C.e_F == 11.0
    assert C.nu == (0,)
    assert C.M_F(0) == pytest.approx(6.5)


def test_mf_increasing(any_datum):
    vals = [any_datum.constants.M_F(m) for m in range(7)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert any_datum.constants.f_F % 2 == 0


def test_nu_rule():
    d = make_datum([3.0, 1.0], [0.2, 0.7], Q=1.0)
    # floor(3/2 - 0.2) = 1; 0.7 > 1/2 gives 0
    assert d.constants.nu == (1, 0)
    assert d.constants.f_F == 2


@pytest.mark.parametrize("field, kw", [
    ("lambda", dict(lambdas=(-1.0,))),
    ("omega", dict(omega=1.1)),
    ("mu", dict(mus=(-0.5,))),
    ("Q", dict(Q=0.0)),
    ("pole_order", dict(pole_order=-1)),
])
def test_validation_names_field(field, kw):
    base = dict(q=1, Q=1.0, lambdas=(0.5,), mus=(0j,), omega=1, pole_order=0,
                coeff_source=CoefficientSource("zeta"))
    base.update(kw)
    with pytest.raises(ValidationError) as exc:
        SelbergDatum(**base)
    assert exc.value.field == field


def test_zeta_coefficients():
    # [TRIVIAL]
    assert np.array_equal(coefficients(CoefficientSource("zeta"), 5), np.ones(5))


def test_tau_values():
    # [DERIVED] q-expansion of q prod (1 - q^n)^24
    assert ramanujan_tau(10) == TAU


def test_tau_brute_force():
    # [DERIVED] independent product expansion with plain lists
    n = 30
    poly = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(24):
            poly = [poly[i] - (poly[i - k] if i >= k else 0) for i in range(n + 1)]
    assert ramanujan_tau(n) == poly[:n]


def test_delta_normalized(delta):
    # [DERIVED] lambda(2) = -24 / 2^(11/2)
    a = delta.coefficients(3)
    assert a[0] == 1
    assert a[1] == pytest.approx(-24 / 2 ** 5.5, rel=1e-15)


def test_rankin_selberg_coefficient(rs):
    # [DERIVED] |lambda(2)|^2 = 576 / 2^11
    assert rs.coefficients(2)[1] == pytest.approx(576 / 2 ** 11, rel=1e-15)


def test_rankin_selberg_full_convolution():
    full = builtin("rankin_selberg_delta_full").coefficients(16)
    lit = builtin("rankin_selberg_delta").coefficients(16)
    # b(n) = sum_{d^2 | n} a(n/d^2)
    assert full[3] == pytest.approx(lit[3] + lit[0])
    assert full[15] == pytest.approx(lit[15] + lit[3] + lit[0])
    assert full[5] == lit[5]


def test_hecke_multiplicativity(delta):
    a = delta.coefficients(1000)
    for m, n in [(2, 3), (4, 9), (5, 7), (8, 125), (11, 13), (16, 27)]:
        assert abs(a[m * n - 1] - a[m - 1] * a[n - 1]) <= 1e-12


def test_cache_prefix_consistent():
    src = CoefficientSource("cusp_form_delta")
    short = src.coefficients(10).copy()
    long = src.coefficients(500)
    assert np.array_equal(long[:10], short)


def test_user_table_range():
    src = CoefficientSource("user_table", table=[1, 0.5, 0.25])
    with pytest.raises(CoefficientRangeError) as exc:
        src.coefficients(5)
    assert exc.value.details["required"] == 5


def test_growth_diagnostic(any_datum):
    # axiom (d) smoke check: max |a(n)|/n^0.3 stays bounded as N grows
    a = np.abs(any_datum.coefficients(10_000))
    n = np.arange(1, a.size + 1)
    ratios = [np.max(a[:N] / n[:N] ** 0.3) for N in (100, 1000, 10_000)]
    assert ratios[2] <= 2 * ratios[0] + 1


def test_completed_function_symmetry(zeta):
    # Phi(s) = Q^s Gamma(s/2) zeta(s) is symmetric under s -> 1 - s; both sides
    # from the Euler-Maclaurin oracle at sigma = 3 and its reflection
    from selberg_afe.oracle import euler_maclaurin_zeta
    from selberg_afe.special import log_gamma
    for t in (5.0, 17.0, 40.0):
        s = complex(3, t)
        phi = np.exp(s * math.log(zeta.Q) + log_gamma(s / 2)) * euler_maclaurin_zeta(s)
        r = (1 - s).conjugate()
        phir = np.exp(r * math.log(zeta.Q) + log_gamma(r / 2)) * euler_maclaurin_zeta(r)
        assert abs(phi - phir.conjugate()) / abs(phi) <= 1e-6
