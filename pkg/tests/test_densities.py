import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from radialweak.densities import Exponential, Gaussian, IndicatorBall, PowerTail, Tabulated, parse_density
from radialweak.errors import DomainError

PROFILES = [Gaussian(), Gaussian(2.5), Exponential(), Exponential(0.3), IndicatorBall(1.0), PowerTail(9.0)]


@pytest.mark.parametrize("density", PROFILES, ids=lambda p: p.label)
def test_profiles_nonincreasing(density):
    s = np.sort(np.concatenate((np.linspace(0, 20, 2001), np.geomspace(1e-6, 1e4, 200))))
    v = density.eval(s)
    assert np.all(np.diff(v) <= 0.0)
    assert v[0] > 0.0


@pytest.mark.parametrize("density, d", [(Gaussian(1.7), 3), (Exponential(0.6), 4),
                                        (IndicatorBall(2.0), 5), (PowerTail(9.5), 6)],
                         ids=lambda x: str(x))
@pytest.mark.parametrize("R", [0.3, 1.0, 2.5, 8.0])
def test_closed_form_moments_match_scipy(density, d, R):
    top = min(R, density.support_radius)
    ref, _ = integrate.quad(lambda s: float(density.eval(s)) * s ** (d - 1), 0.0, top,
                            epsabs=0, epsrel=1e-13, limit=200)
    assert density.log_radial_moment(d, R) == pytest.approx(math.log(ref), abs=1e-11)


def _mp_tail_gaussian(d, T):
    return 2 ** (mp.mpf(d) / 2 - 1) * mp.gammainc(mp.mpf(d) / 2, mp.mpf(T) ** 2 / 2)


def _mp_tail_exponential(d, T):
    return mp.gammainc(d, T)


def _mp_tail_powertail7(d, T):
    return mp.quad(lambda s: (1 + s) ** -7 * s ** (d - 1), [T, 2 * T, 8 * T, mp.inf])


@pytest.mark.parametrize("density, d, oracle", [
    (Gaussian(), 4, _mp_tail_gaussian),
    (Exponential(), 3, _mp_tail_exponential),
    (PowerTail(7.0), 4, _mp_tail_powertail7),
], ids=["gaussian", "exponential", "powertail"])
@pytest.mark.parametrize("T", [0.5, 3.0, 12.0, 60.0])
def test_tail_bounds_dominate(density, d, oracle, T):
    # mpmath keeps e^-1800 representable
    assert float(mp.log(oracle(d, T))) <= density.log_tail_bound(d, T) + 1e-12


def test_compact_support_tail_is_zero():
    assert IndicatorBall(2.0).log_tail_bound(3, 2.0) == -math.inf


def test_powertail_integrability_gate():
    PowerTail(4.5).check_dimension(4)
    with pytest.raises(DomainError):
        PowerTail(4.0).check_dimension(4)
    with pytest.raises(DomainError):
        PowerTail(3.0).check_dimension(5)


@pytest.mark.parametrize("cls, arg", [(Gaussian, 0.0), (Exponential, -1.0), (IndicatorBall, 0.0),
                                      (PowerTail, -2.0)])
def test_bad_parameters(cls, arg):
    with pytest.raises(DomainError):
        cls(arg)


@pytest.mark.parametrize("density", PROFILES[:5], ids=lambda p: p.label)
def test_dilate(density):
    c = 2.7
    scaled = density.dilate(c)
    s = np.linspace(0.01, 5.0, 50)
    np.testing.assert_allclose(scaled.eval(c * s), density.eval(s), rtol=1e-14)


# ---------------------------------------------------------------------------
# tabulated


def test_tabulated_interpolation_and_support():
    tab = Tabulated([0.0, 1.0, 2.0], [1.0, 0.5, 0.0])
    assert tab.eval(0.5) == pytest.approx(0.75)
    assert tab.eval(1.5) == pytest.approx(0.25)
    assert tab.eval(2.5) == 0.0
    assert tab.support_radius == 2.0


def test_tabulated_flat_before_first_radius():
    tab = Tabulated([0.5, 1.0], [2.0, 1.0])
    assert tab.eval(0.1) == 2.0
    assert tab.eval(1.0001) == 0.0


def test_tabulated_from_file(tmp_path):
    path = tmp_path / "profile.txt"
    path.write_text("0.0 1.0\n1.0 0.5\n3.0 0.1\n")
    tab = Tabulated.from_file(path)
    assert tab.label == "tabulated:profile.txt"
    assert tab.support_radius == 3.0
    assert parse_density(f"tabulated:{path}").label == tab.label
    assert parse_density(str(path)).label == tab.label


@pytest.mark.parametrize("text", [
    "0 1\n1 1.2\n",        # increases
    "0 1\n0 0.5\n",        # radii not strictly increasing
    "1 1\n0.5 0.5\n",      # radii decreasing
    "0 1 3\n1 0.5 2\n",    # three columns
    "0 0\n1 0\n",          # identically zero
    "0 1\n",               # one row
    "0 1\n1 x\n",          # not numeric
    "-1 1\n1 0.5\n",       # negative radius
])
def test_tabulated_rejections(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(DomainError):
        Tabulated.from_file(path)


@settings(max_examples=100)
@given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=2, max_size=30))
def test_tabulated_accepts_any_nonincreasing_samples(vals):
    vals = sorted(vals, reverse=True)
    if vals[0] == 0.0:
        return
    tab = Tabulated(np.arange(len(vals), dtype=float), vals)
    s = np.linspace(0.0, len(vals), 300)
    assert np.all(np.diff(tab.eval(s)) <= 0.0)


# ---------------------------------------------------------------------------
# parse_density


@pytest.mark.parametrize("spec, label", [
    ("gaussian", "gaussian"),
    ("Gaussian:2", "gaussian:2"),
    ("exponential", "exponential"),
    ("indicator:1", "indicator:1"),
    ("powertail:8", "powertail:8"),
])
def test_parse_density(spec, label):
    assert parse_density(spec).label == label


@pytest.mark.parametrize("spec", ["cauchy", "powertail", "indicator:abc", "tabulated:/no/such/file"])
def test_parse_density_rejects(spec):
    with pytest.raises(DomainError):
        parse_density(spec)
