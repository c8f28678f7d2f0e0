"""Acceptance criteria, each asserted at its stated tolerance and budget.

Every test prints one ``criterion N: PASS|FAIL`` line; the lines are repeated
in the pytest terminal summary. Run alone with
``pytest tests/test_acceptance.py -v``.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate, special

from radialweak.bounds import (
    lebesgue_ball_bound,
    one_dim_certificate,
    prop1_ratio,
    scan_prop1_ratio,
    theorem_bound_log,
    verify_theorem_chain,
)
from radialweak.cli import mc_configurations
from radialweak.densities import Exponential, Gaussian, IndicatorBall, PowerTail
from radialweak.geometry import CapSpec, cap_area_upper_bound, gamma_ratio_check, normalized_cap_area
from radialweak.montecarlo import mc_ball_measure, z_score
from radialweak.quadrature import QuadratureConfig
from radialweak.radial_measure import (
    centered_ball_measure,
    complement_measure,
    intersection_measure,
    offset_ball_measure,
)

REL_TOL = 1e-10
CFG = QuadratureConfig(rel_tol=REL_TOL)
SLACK = 10 * REL_TOL
LOG_2_OVER_SQRT3 = math.log(2 / math.sqrt(3))
SEED = 12345

PROFILES = {
    "gaussian": lambda d: Gaussian(),
    "exponential": lambda d: Exponential(),
    "indicator:1": lambda d: IndicatorBall(1.0),
    "powertail:d+2": lambda d: PowerTail(d + 2.0),
}


def _lens_2d(t, r):
    """Area of the unit disk intersected with the disk of radius ``r`` about ``(t, 0)``."""
    if t >= 1 + r:
        return 0.0
    if t <= abs(1 - r):
        return math.pi * min(1.0, r) ** 2
    a = math.acos((t * t + 1 - r * r) / (2 * t))
    b = r * r * math.acos((t * t + r * r - 1) / (2 * t * r))
    c = 0.5 * math.sqrt((-t + r + 1) * (t + r - 1) * (t - r + 1) * (t + r + 1))
    return a + b - c


def test_criterion_1_gamma_ratio(report):
    start = time.perf_counter()
    q = []
    holds = True
    for d in range(1, 1001):
        lhs, rhs = gamma_ratio_check(d)
        holds &= lhs <= rhs
        q.append(lhs / rhs)
    q = np.array(q)
    increasing = bool(np.all(np.diff(q) > 0))
    elapsed = time.perf_counter() - start
    ok = holds and increasing and q[-1] < 1 and q[-1] > 0.999 and elapsed < 1.0
    report(1, ok, "Gamma(1+d/2)/Gamma((1+d)/2) <= sqrt((d+1)/2), d=1..1000",
           f"quotient {q[0]:.6f} -> {q[-1]:.8f}, increasing={increasing}, {elapsed:.3f}s")
    assert ok


def test_criterion_2_cap_area(report):
    start = time.perf_counter()
    holds = all(normalized_cap_area(CapSpec(d, 0.5)) <= cap_area_upper_bound(d) for d in range(2, 501))
    worst = 0.0
    for d in range(2, 51):
        k = d - 2
        num, _ = integrate.quad(lambda u: math.sin(u) ** k, 0.0, math.pi / 3, epsabs=0, epsrel=1e-13, limit=200)
        den, _ = integrate.quad(lambda u: math.sin(u) ** k, 0.0, math.pi, epsabs=0, epsrel=1e-13, limit=200)
        worst = max(worst, abs(normalized_cap_area(CapSpec(d, 0.5)) / (num / den) - 1.0))
    elapsed = time.perf_counter() - start
    ok = holds and worst <= 1e-10 and elapsed < 10.0
    report(2, ok, "cap(d, 1/2) <= cap bound for d=2..500; beta vs sin^(d-2) quadrature, d=2..50",
           f"max rel diff {worst:.2e}, {elapsed:.2f}s")
    assert ok


def _chain_rows():
    rows = {}
    for name, make in PROFILES.items():
        for d in range(2, 65):
            rows[name, d] = verify_theorem_chain(make(d), d, CFG, optimize=False)
    return rows


@pytest.fixture(scope="module")
def chain_rows():
    start = time.perf_counter()
    rows = _chain_rows()
    return rows, time.perf_counter() - start


def test_criterion_3_theorem_chain(report, chain_rows):
    rows, elapsed = chain_rows
    bad = []
    for (name, d), rep in rows.items():
        eq3 = rep.check("eq3")
        ratio_ok = rep.log_ratio_at_R1 >= theorem_bound_log(d) + math.log1p(-SLACK)
        if not (rep.check("eq7").passed and rep.check("eq8").passed and ratio_ok and eq3.holds_within_slack):
            bad.append((name, d))
    worst = min(rep.log_ratio_at_R1 - rep.log_theorem_bound for rep in rows.values())
    ok = not bad and elapsed < 600
    report(3, ok, "R1 found, cap-band and lens checks hold, ratio(R1) >= bound; 4 profiles x d=2..64",
           f"{len(rows)} reports, failures {bad[:5]}, min log margin {worst:.4f}, {elapsed:.1f}s")
    assert ok


def test_criterion_4_growth_rate(report, chain_rows):
    rows, _ = chain_rows
    dims = np.arange(16, 65)
    logs = np.array([rows["gaussian", int(d)].log_ratio_at_R1 for d in dims])
    slope = float(np.polyfit(dims, logs, 1)[0])
    floor = LOG_2_OVER_SQRT3 / 6 - 0.002
    ok = slope >= floor
    report(4, ok, "Gaussian: fitted slope of log ratio(R1) over d=16..64",
           f"slope {slope:.5f} vs floor {floor:.5f}")
    assert ok


def test_criterion_5_restricted_lebesgue(report):
    start = time.perf_counter()
    holds = True
    for d in range(2, 201):
        exact, bound = lebesgue_ball_bound(d)
        holds &= exact >= bound
    exact2 = math.exp(lebesgue_ball_bound(2)[0])
    lens = math.pi / (2 * math.pi / 3 - math.sqrt(3) / 2)
    diff = abs(exact2 - lens)
    elapsed = time.perf_counter() - start
    ok = holds and diff <= 1e-9 and elapsed < 1.0
    report(5, ok, "exact Lebesgue-ball ratio >= closed-form bound, d=2..200; d=2 circle lens",
           f"d=2 ratio {exact2:.12f}, |diff| {diff:.1e}, {elapsed:.3f}s")
    assert ok


# grid used for the supremum; the budget is one minute for all profiles
SUP_PER_DECADE = 8


def test_criterion_6_trivial_and_one_dim(report):
    start = time.perf_counter()
    worst = math.inf
    for name, make in PROFILES.items():
        for d in range(1, 65):
            density = make(d)
            _, logs = scan_prop1_ratio(density, d, CFG, per_decade=SUP_PER_DECADE)
            worst = min(worst, float(np.max(logs)))
    one_dim = {name: one_dim_certificate(make(1), CFG, per_decade=SUP_PER_DECADE) for name, make in PROFILES.items()}
    elapsed = time.perf_counter() - start
    ok = worst >= math.log1p(-1e-9) and min(one_dim.values()) >= 2 - 1e-6 and elapsed < 60
    report(6, ok, "sup over grid of ratio >= 1 - 1e-9 (d=1..64); d=1 certificate >= 2 - 1e-6",
           f"min sup {math.exp(worst):.6f}, d=1 certificates "
           + ", ".join(f"{k}={v:.9f}" for k, v in one_dim.items()) + f", {elapsed:.1f}s")
    assert ok


def test_criterion_7_monte_carlo(report):
    start = time.perf_counter()
    zs, bad, fractions = [], [], []
    for name, make in PROFILES.items():
        for d in (2, 3, 5, 10, 20):
            density = make(d)
            for k, (t, r) in enumerate(mc_configurations(density, d, 5, SEED)):
                mc = mc_ball_measure(density, d, t, r, 1_000_000, np.random.default_rng([SEED, d, k]))
                z = z_score(offset_ball_measure(density, d, t, r, CFG), mc)
                zs.append(z)
                fractions.append(mc.hits / mc.n)
                if abs(z) > 3:
                    bad.append((name, d, round(t, 3), round(r, 3), round(z, 2)))
    elapsed = time.perf_counter() - start
    zs = np.array(zs)
    ok = not bad and elapsed < 300
    report(7, ok, "quadrature vs Monte Carlo within 3 SE, n=1e6, 4 profiles x 5 dims x 5 pairs",
           f"{zs.size} pairs, max |z| {np.max(np.abs(zs)):.2f}, mean z {zs.mean():+.2f}, "
           f"sd {zs.std():.2f}, hit fractions {min(fractions):.3f}..{max(fractions):.3f}, "
           f"outliers {bad}, {elapsed:.1f}s")
    assert ok


def test_criterion_8_closed_forms(report):
    worst_g = 0.0
    for d in range(1, 101):
        log_total = 0.5 * d * math.log(2 * math.pi)
        for R in (0.25, 0.5, 1.0, 2.0, math.sqrt(d), 1.5 * math.sqrt(d), 2.5 * math.sqrt(d)):
            expected = log_total + math.log(special.gammainc(0.5 * d, 0.5 * R * R))
            got = centered_ball_measure(Gaussian(), d, R, CFG, method="quad").log_value
            worst_g = max(worst_g, abs(math.expm1(got - expected)))
    worst_l = 0.0
    for t, r in ((1.0, 1.0), (0.5, 0.7), (0.3, 1.2), (1.5, 0.9), (0.9, 0.2)):
        got = offset_ball_measure(IndicatorBall(1.0), 2, t, r, CFG).to_float()
        worst_l = max(worst_l, abs(got / _lens_2d(t, r) - 1.0))
    ok = worst_g <= 1e-10 and worst_l <= 1e-10
    report(8, ok, "Gaussian centered quadrature vs total*P(d/2,R^2/2), d=1..100; disk lens",
           f"max rel err {worst_g:.1e} (Gaussian), {worst_l:.1e} (lens)")
    assert ok


def test_criterion_9_additivity_containment(report):
    rng = np.random.default_rng(SEED)
    worst_add, worst_cont, count = 0.0, math.inf, 0
    for name, make in PROFILES.items():
        for _ in range(100):
            d = int(rng.integers(1, 41))
            density = make(d)
            scale = density.typical_radius(d)
            R, t, r = (rng.uniform(0.05, 2.0, 3) * scale).tolist()
            whole = offset_ball_measure(density, d, t, r, CFG)
            inter = intersection_measure(density, d, R, t, r, CFG)
            comp = complement_measure(density, d, R, t, r, CFG)
            if whole.is_zero:
                gap = 0.0 if inter.is_zero and comp.is_zero else math.inf
            else:
                gap = abs((inter + comp).log_value - whole.log_value)
            worst_add = max(worst_add, gap)
            lens = intersection_measure(density, d, R, R, R, CFG).log_value
            ball = offset_ball_measure(density, d, R / 2, math.sqrt(3) / 2 * R, CFG).log_value
            worst_cont = min(worst_cont, ball - lens)
            count += 1
    ok = worst_add <= 2 * REL_TOL and worst_cont >= 0.0
    report(9, ok, "intersection + complement = whole; lens <= enclosing ball, 100 configs per profile",
           f"{count} configs, max additivity gap {worst_add:.1e}, min containment margin {worst_cont:.3e}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
