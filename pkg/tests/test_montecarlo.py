import math

import numpy as np
import pytest
from scipy import stats

from radialweak.densities import Exponential, Gaussian, IndicatorBall, PowerTail
from radialweak.errors import DomainError
from radialweak.montecarlo import RadialSampler, mc_ball_measure, z_score
from radialweak.radial_measure import offset_ball_measure, total_mass


def test_bit_identical_repeats():
    for density in (Gaussian(), Exponential()):
        a = mc_ball_measure(density, 5, 1.0, 1.2, 20_000, seed=7)
        b = mc_ball_measure(density, 5, 1.0, 1.2, 20_000, seed=7)
        assert a == b
    c = mc_ball_measure(Exponential(), 5, 1.0, 1.2, 20_000, seed=8)
    assert c.hits != a.hits


def test_generator_seed_is_accepted():
    a = mc_ball_measure(Gaussian(), 3, 1.0, 1.0, 5_000, seed=np.random.default_rng(3))
    b = mc_ball_measure(Gaussian(), 3, 1.0, 1.0, 5_000, seed=3)
    assert a == b


def test_huge_ball_is_all_hit():
    est = mc_ball_measure(Gaussian(), 3, 0.5, 100.0, 10_000, seed=1)
    assert est.degenerate == "all-hit"
    assert est.std_err == 0.0
    assert est.estimate.log_value == pytest.approx(total_mass(Gaussian(), 3, method="auto").log_value, abs=1e-15)


def test_disjoint_ball_is_no_hit():
    est = mc_ball_measure(IndicatorBall(1.0), 3, 5.0, 1.0, 10_000, seed=1)
    assert est.degenerate == "no-hit"
    assert est.estimate.is_zero


def test_gaussian_d2_centered_against_closed_form():
    r, n = 1.3, 1_000_000
    est = mc_ball_measure(Gaussian(), 2, 0.0, r, n, seed=2024)
    p = -math.expm1(-r * r / 2)
    assert abs(est.hits / n - p) <= 3 * math.sqrt(p * (1 - p) / n)


@pytest.mark.parametrize("d", [3, 5, 10])
def test_gaussian_unit_offset_against_quadrature(d):
    est = mc_ball_measure(Gaussian(), d, 1.0, 1.0, 1_000_000, seed=100 + d)
    assert abs(z_score(offset_ball_measure(Gaussian(), d, 1.0, 1.0), est)) <= 3.0


@pytest.mark.parametrize("density, d, law", [
    (Exponential(), 3, stats.gamma(3)),
    (Gaussian(), 4, stats.chi(4)),
    (PowerTail(6.0), 2, None),
], ids=["exponential", "gaussian", "powertail"])
def test_radial_sampler_law(density, d, law):
    s = RadialSampler(density, d).sample(np.random.default_rng(11), 50_000)
    if law is None:
        # s / (1 + s) ~ Beta(d, p - d)
        s, law = s / (1.0 + s), stats.beta(d, density.p - d)
    assert stats.kstest(s, law.cdf).pvalue > 1e-3


def test_small_sample_warns_but_reports():
    with pytest.warns(UserWarning, match="Monte Carlo samples"):
        est = mc_ball_measure(Gaussian(), 2, 1.0, 1.0, 100, seed=0)
    assert est.n == 100


@pytest.mark.parametrize("t, r, n", [(-1.0, 1.0, 2000), (1.0, 0.0, 2000), (1.0, 1.0, 0)])
def test_bad_arguments(t, r, n):
    with pytest.raises(DomainError):
        mc_ball_measure(Gaussian(), 2, t, r, n, seed=0)


def test_z_score_sign():
    est = mc_ball_measure(Gaussian(), 3, 1.0, 1.0, 10_000, seed=5)
    exact = offset_ball_measure(Gaussian(), 3, 1.0, 1.0)
    assert z_score(est.estimate, est) == 0.0
    bigger = exact * exact.from_float(1.5)
    assert z_score(bigger, est) > 0
