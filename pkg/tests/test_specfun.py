import math

import numpy as np
import pytest

from hsconvex.funcat import Interval
from hsconvex.quad import integrate
from hsconvex.specfun import beta, gamma, log_gamma

GRID = [0.25 * k for k in range(1, 17)]


def test_log_gamma_examples():
    assert math.isclose(log_gamma(5.0), math.log(24.0), rel_tol=1e-13)
    assert log_gamma(1.0) == 0.0
    assert abs(log_gamma(0.5) - 0.5 * math.log(math.pi)) <= 1e-13


def test_log_gamma_half_against_quadrature():
    # integral of t^-1/2 (1-t)^-1/2 over [0, 1] is Gamma(1/2)^2 = pi; the
    # integrand is symmetric so integrate [0, 1/2] and double
    res = integrate(lambda t: 1.0 / np.sqrt(t * (1.0 - t)), Interval(0.0, 0.5), 1e-11)
    assert res.converged
    assert abs(2.0 * log_gamma(0.5) - math.log(2.0 * res.value)) <= 1e-10


@pytest.mark.parametrize("x", [0.1, 0.3, 0.5, 0.9, 1.5, 2.5, 3.7, 7.25, 12.0, 33.3, 170.5])
def test_log_gamma_matches_mpmath(x):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    ref = float(mpmath.loggamma(x))
    assert abs(log_gamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_log_gamma_rejects(x):
    with pytest.raises(ValueError):
        log_gamma(x)


def test_recurrence():
    for x in np.linspace(0.5, 10.0, 200):
        assert abs(log_gamma(x + 1) - log_gamma(x) - math.log(x)) <= 1e-12


def test_gamma_factorials():
    for n in range(1, 12):
        assert math.isclose(gamma(n + 1), math.factorial(n), rel_tol=1e-13)


def test_beta_examples():
    assert math.isclose(beta(2, 2), 1 / 6, rel_tol=1e-14)
    assert math.isclose(beta(1, 1), 1.0, rel_tol=1e-14)
    assert abs(beta(1.5, 1.5) - math.pi / 8) <= 1e-13


def test_beta_three_halves_against_quadrature():
    res = integrate(lambda t: np.sqrt(t * (1 - t)), Interval(0, 1), 1e-12)
    assert abs(beta(1.5, 1.5) - res.value) <= 1e-10


def test_beta_symmetry():
    for x in GRID:
        for y in GRID:
            assert math.isclose(beta(x, y), beta(y, x), rel_tol=1e-12)


def test_beta_integral_consistency():
    for x in np.linspace(1.0, 3.0, 9):
        for y in np.linspace(1.0, 3.0, 9):
            res = integrate(lambda t: t ** (x - 1) * (1 - t) ** (y - 1), Interval(0, 1))
            assert abs(beta(x, y) - res.value) <= 1e-8


def test_beta_rejects_nonpositive():
    with pytest.raises(ValueError):
        beta(0.0, 1.0)
    with pytest.raises(ValueError):
        beta(1.0, -2.0)


def test_log_gamma_matches_stdlib_lgamma():
    for x in np.linspace(0.05, 60.0, 400):
        ref = math.lgamma(x)
        assert abs(log_gamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))
