import math

import numpy as np
import pytest
from scipy import integrate

from radialweak.errors import DomainError, QuadratureError
from radialweak.quadrature import QuadratureConfig, log_quad


def _log_poly(x):
    with np.errstate(divide="ignore"):
        return np.log(1.0 + 3.0 * x ** 2)


def test_polynomial_exact():
    r = log_quad(_log_poly, [0.0, 2.0])
    assert math.exp(r.log_value) == pytest.approx(10.0, rel=1e-14)


def test_matches_scipy_on_smooth_integrand():
    f = lambda x: np.exp(-x) * np.cos(x) ** 2 + 0.1  # noqa: E731
    ref, _ = integrate.quad(f, 0.0, 7.0, epsabs=0, epsrel=1e-13)
    r = log_quad(lambda x: np.log(f(x)), [0.0, 7.0], QuadratureConfig(rel_tol=1e-12))
    assert math.exp(r.log_value) == pytest.approx(ref, rel=1e-11)
    assert r.rel_error <= 1e-12


def test_beyond_double_range():
    # int_0^1 exp(2000 x) dx = (e^2000 - 1) / 2000
    r = log_quad(lambda x: 2000.0 * x, [0.0, 1.0])
    expected = 2000.0 + math.log1p(-math.exp(-2000.0)) - math.log(2000.0)
    assert r.log_value == pytest.approx(expected, abs=1e-10)


def test_far_below_double_range():
    r = log_quad(lambda x: -5000.0 + 0.0 * x, [0.0, 3.0])
    assert r.log_value == pytest.approx(-5000.0 + math.log(3.0), abs=1e-12)


def test_jump_at_breakpoint():
    logf = lambda x: np.where(x <= 1.3, 0.0, -np.inf)  # noqa: E731
    r = log_quad(logf, [0.0, 1.3, 4.0])
    assert math.exp(r.log_value) == pytest.approx(1.3, rel=1e-14)


def test_zero_integrand_and_empty_interval():
    assert log_quad(lambda x: np.full_like(x, -np.inf), [0.0, 1.0]).is_zero
    assert log_quad(lambda x: 0.0 * x, [2.0, 2.0]).is_zero


def test_sqrt_endpoint_singularity():
    r = log_quad(lambda x: -0.5 * np.log(x), [0.0, 1.0], QuadratureConfig(rel_tol=1e-10))
    assert math.exp(r.log_value) == pytest.approx(2.0, rel=1e-9)


def test_budget_exhaustion_reports_partial():
    # 1/x^0.999 is barely integrable; ten panels cannot resolve it
    cfg = QuadratureConfig(rel_tol=1e-14, max_subdivisions=10, initial_panels=2)
    with pytest.raises(QuadratureError) as info:
        log_quad(lambda x: -0.999 * np.log(x) + np.sin(40 * x), [0.0, 1.0], cfg)
    assert math.isfinite(info.value.partial)
    assert info.value.achieved > 1e-14


def test_infinite_limits_rejected():
    with pytest.raises(DomainError):
        log_quad(lambda x: -x, [0.0, math.inf])


@pytest.mark.parametrize("kwargs", [{"rel_tol": 0.0}, {"rel_tol": -1e-3}, {"max_subdivisions": 9}])
def test_config_invariants(kwargs):
    with pytest.raises(DomainError):
        QuadratureConfig(**kwargs)
