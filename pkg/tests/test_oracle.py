import cmath

import numpy as np
import pytest

from selberg_afe.errors import AccuracyError, CapacityError, DomainError, ValidationError
from selberg_afe.oracle import (CSV_COLUMNS, OracleConfig, cauchy_circle, default_grid,
                                direct_series, euler_maclaurin_zeta, fdfe_residual, fit_slope,
                                residual_suite)


def test_zeta_two():
    # [TRIVIAL] zeta(2) = pi^2 / 6
    assert abs(euler_maclaurin_zeta(2) - np.pi ** 2 / 6) <= 1e-13


def test_zeta_prime_two():
    # [DERIVED] zeta'(2), 20 digits from an independent high-precision evaluation
    assert abs(euler_maclaurin_zeta(2, 1) - (-0.9375482543158437537)) <= 1e-12


def test_first_zero():
    # [PAPER] first nontrivial zero
    assert abs(euler_maclaurin_zeta(0.5 + 14.1347251417j)) <= 1e-3


@pytest.mark.parametrize("s, m, ref", [
    # [DERIVED] frozen from mpmath at 30 digits
    (0.5 + 30j, 0, -0.12064228759004370 - 0.58369121476370629j),
    (0.5 + 30j, 1, 1.5377408181024704 + 0.15789165631692498j),
    (0.5 + 30j, 2, -2.2795782654351408 + 0.30563265840551958j),
    (0.5 + 100j, 0, 2.6926198856813241 - 0.020386029602598162j),
    (0.25 + 60j, 1, -1.4017951097560727 - 1.1460455440438026j),
])
def test_frozen_values(s, m, ref):
    assert abs(euler_maclaurin_zeta(s, m) - ref) <= 1e-10


def test_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    with mpmath.workdps(30):
        for s in (0.1 + 40j, 0.9 + 250j, 3 - 7j):
            for m in range(4):
                ref = complex(mpmath.zeta(mpmath.mpc(s.real, s.imag), 1, m))
                assert abs(euler_maclaurin_zeta(s, m) - ref) <= 1e-10 * max(1, abs(ref))


def test_cauchy_matches_em():
    s = 0.5 + 30j
    d = cauchy_circle(lambda z: np.array([euler_maclaurin_zeta(p) for p in np.atleast_1d(z)]),
                      s, 1, OracleConfig(method="cauchy_circle", target_abs_tol=1e-8))
    assert abs(d - euler_maclaurin_zeta(s, 1)) <= 1e-8


def test_cauchy_exp():
    for m in range(5):
        assert abs(cauchy_circle(np.exp, 0.3 + 0.2j, m) - cmath.exp(0.3 + 0.2j)) <= 1e-12


def test_cauchy_polynomials():
    # [TRIVIAL] polynomials of degree <= 5 are recovered exactly
    rng = np.random.default_rng(3)
    c = rng.normal(size=6) + 1j * rng.normal(size=6)
    p = np.polynomial.Polynomial(c)
    s = 1 - 2j
    for m in range(6):
        ref = complex(p.deriv(m)(s)) if m else complex(p(s))
        got = cauchy_circle(p, s, m, OracleConfig(method="cauchy_circle", target_abs_tol=1e-8))
        assert abs(got - ref) <= 1e-9 * max(1, abs(ref))


def test_cauchy_pole_guard():
    with pytest.raises(DomainError):
        cauchy_circle(lambda z: 1 / (z - 1), 1.3, 0, poles=(1.0,))
    with pytest.raises(ValidationError):
        cauchy_circle(np.exp, 0, -1)


def test_cauchy_accuracy_error():
    # a pole just outside the circle defeats the doubling test
    with pytest.raises(AccuracyError):
        cauchy_circle(lambda z: 1 / (z - 0.26), 0, 3)


def test_config_validation():
    with pytest.raises(ValidationError):
        OracleConfig(method="guess")
    with pytest.raises(ValidationError):
        OracleConfig(target_abs_tol=1e-15)


def test_direct_series_zeta(zeta):
    s = 1.5 + 20j
    assert abs(direct_series(zeta, s, 1) - euler_maclaurin_zeta(s, 1)) <= 1e-10


def test_direct_series_symmetry(delta):
    # [TRIVIAL] real coefficients: F(conj s) = conj F(s)
    a = direct_series(delta, 6 + 10j, 1)
    b = direct_series(delta, 6 - 10j, 1)
    assert abs(b - a.conjugate()) <= 1e-12


def test_direct_series_domain(zeta):
    with pytest.raises(DomainError):
        direct_series(zeta, 1.0 + 5j)


def test_direct_series_capacity(delta):
    with pytest.raises(CapacityError):
        direct_series(delta, 1.15 + 5j, cfg=OracleConfig(max_terms=2000))
    with pytest.raises(CapacityError):
        direct_series(delta, 1.6 + 5j)


def test_em_pole():
    with pytest.raises(DomainError):
        euler_maclaurin_zeta(1.0)


def test_fdfe_residual(any_datum):
    _, res, budget = fdfe_residual(any_datum, 0.5 + 60j, 1)
    assert res <= 1e-10 and res <= budget


def test_fit_slope():
    ts = np.array([10.0, 100.0, 1000.0])
    assert fit_slope(ts, 3 * ts ** -0.25) == pytest.approx(-0.25)


def test_residual_suite_zeta(zeta):
    rep = residual_suite(zeta, default_grid((0.5,), (60.0,)), m_max=1,
                         slope_ts=(50.0, 100.0, 200.0, 400.0))
    modes = [r["mode"] for r in rep.rows]
    assert modes[:7] == ["sharp", "smoothed", "sharp_vs_smoothed", "fdfe",
                         "ysplit:0.25", "ysplit:0.5", "ysplit:2"]
    assert modes[-1] == "slope"
    assert rep.passed
    lines = rep.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == len(rep.rows) + 1
    assert lines[1].endswith(",true")


def test_residual_suite_other(rs):
    rep = residual_suite(rs, [0.5 + 40j], m_max=0)
    assert {r["mode"] for r in rep.rows} == {"fdfe", "ysplit:0.25", "ysplit:0.5", "ysplit:2"}
    assert rep.passed
