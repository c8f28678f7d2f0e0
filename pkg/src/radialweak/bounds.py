"""Lower-bound certificates for the weak type (1,1) constant ``c_d``.

The certificates all come from testing the weak type inequality against a
point mass at the origin: with ``y`` on ``S(0, R)``,
``c_d >= mu(B(0, R)) / mu(B(y, R))``. The exponential bound is that ratio
evaluated at ``R1``, the largest radius where
``mu(B(0, R)) / mu(B(0, (sqrt3/2) R)) = (2/sqrt3)^(d/6)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .densities import RadialDensity
from .errors import DomainError, NumericalError, QuadratureError, SearchError
from .geometry import (
    CapSpec,
    gamma_ratio_check,
    log_cap_area_upper_bound,
    normalized_cap_area,
)
from .quadrature import QuadratureConfig
from .radial_measure import (
    centered_ball_measure,
    complement_measure,
    intersection_measure,
    offset_ball_measure,
)
from .specfun import LogNonneg, log_reg_inc_beta

__all__ = [
    "CHECK_IDS",
    "Check",
    "BoundReport",
    "compare",
    "delta_maximal_value",
    "prop1_ratio",
    "h_ratio",
    "find_R1",
    "scan_R1",
    "R1Scan",
    "theorem_bound_log",
    "log_cap_correction",
    "verify_theorem_chain",
    "verify_one_dim",
    "scan_prop1_ratio",
    "best_ratio",
    "lebesgue_ball_bound",
    "one_dim_certificate",
    "general_prop1_inf",
]

CHECK_IDS = ("eq3", "eq4", "eq5_6", "eq7", "eq8", "trivial_ge1", "oned_ge2", "eq9", "containment")

LOG_2_OVER_SQRT3 = math.log(2.0 / math.sqrt(3.0))
SQRT3_2 = math.sqrt(3.0) / 2.0
PER_DECADE = 64
STABLE_DOUBLINGS = 8
R1_LOG_TOL = 1e-8
H_ONE_TOL = 1e-6
GOLDEN_XTOL = 1e-6
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _cfg(cfg):
    return cfg if cfg is not None else QuadratureConfig()


def slack_for(cfg: QuadratureConfig) -> float:
    return 10.0 * cfg.rel_tol


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class Check:
    """One inequality ``lhs <= rhs`` (or ``>=``), both sides as logarithms."""

    id: str
    log_lhs: float
    log_rhs: float
    relation: str
    slack: float
    status: str
    note: str = ""

    @property
    def margin(self) -> float:
        """Log amount by which the inequality holds; negative when violated."""
        if self.relation == "<=":
            return self.log_rhs - self.log_lhs
        return self.log_lhs - self.log_rhs

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def holds_within_slack(self) -> bool:
        return self.status != "fail"


def compare(check_id: str, log_lhs: float, log_rhs: float, relation: str, slack: float,
            note: str = "") -> Check:
    """Classify ``lhs relation rhs``: pass, inconclusive (fails by at most ``slack``), or fail."""
    if check_id not in CHECK_IDS:
        raise DomainError(f"unknown check id {check_id!r}")
    if relation not in ("<=", ">="):
        raise DomainError(f"relation must be '<=' or '>=', got {relation!r}")
    margin = log_rhs - log_lhs if relation == "<=" else log_lhs - log_rhs
    if margin >= 0 or (math.isinf(log_lhs) and log_lhs == log_rhs):
        status = "pass"
    elif margin >= -slack:
        status = "inconclusive"
    else:
        status = "fail"
    return Check(check_id, float(log_lhs), float(log_rhs), relation, slack, status, note)


@dataclass
class BoundReport:
    d: int
    density_id: str
    R1: float
    log_ratio_at_R1: float
    R_star: float | None
    log_ratio_star: float | None
    log_theorem_bound: float
    checks: list[Check] = field(default_factory=list)
    quadrature_error: float = 0.0
    horizon: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if "fail" in states:
            return "fail"
        if "inconclusive" in states:
            return "inconclusive"
        return "pass"

    def check(self, check_id: str) -> Check:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    @property
    def margin(self) -> float:
        """Log margin of the certificate over the theorem bound."""
        best = self.log_ratio_at_R1
        if self.log_ratio_star is not None:
            best = max(best, self.log_ratio_star)
        return best - self.log_theorem_bound


# ---------------------------------------------------------------------------
# elementary certificates


def delta_maximal_value(density: RadialDensity, d: int, t: float,
                        cfg: QuadratureConfig | None = None) -> LogNonneg:
    """Maximal function of the point mass at 0, evaluated at distance ``t``.

    The ball ``B(z, |z|)`` is the smallest one about ``z`` holding the origin,
    so the value is ``1 / mu(B(z, |z|))``; a null ball gives ``+inf``.
    """
    if not t > 0:
        raise DomainError("delta_maximal_value needs t > 0")
    m = offset_ball_measure(density, d, t, t, cfg)
    if m.is_zero:
        return LogNonneg.infinity()
    return m.reciprocal()


def prop1_ratio(density: RadialDensity, d: int, R: float,
                cfg: QuadratureConfig | None = None) -> LogNonneg:
    """``mu(B(0, R)) / mu(B(R e1, R))``; ``+inf`` when the offset ball is null."""
    if not R > 0:
        raise DomainError("prop1_ratio needs R > 0")
    cfg = _cfg(cfg)
    num = centered_ball_measure(density, d, R, cfg)
    if num.is_zero:
        raise DomainError("centered ball has zero measure; origin is not in the support")
    den = offset_ball_measure(density, d, R, R, cfg)
    if den.is_zero:
        return LogNonneg.infinity()
    return num / den


def h_ratio(density: RadialDensity, d: int, R: float,
            cfg: QuadratureConfig | None = None) -> LogNonneg:
    """``mu(B(0, R)) / mu(B(0, (sqrt3/2) R))``."""
    if not R > 0:
        raise DomainError("h_ratio needs R > 0")
    cfg = _cfg(cfg)
    return centered_ball_measure(density, d, R, cfg) / centered_ball_measure(density, d, SQRT3_2 * R, cfg)


def theorem_bound_log(d: int) -> float:
    """Log of ``(1 + 2 sqrt2 / sqrt(3 pi d) * sqrt(1 + 1/d))^-1 (2/sqrt3)^(d/6)``."""
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    return d / 6.0 * LOG_2_OVER_SQRT3 - math.log1p(_cap_correction(d))


def _cap_correction(d: int) -> float:
    return 2.0 * math.sqrt(2.0) / math.sqrt(3.0 * math.pi * d) * math.sqrt(1.0 + 1.0 / d)


def log_cap_correction(d: int) -> float:
    """Log of ``2 sqrt2 / sqrt(3 pi d) * sqrt(1 + 1/d)``."""
    return math.log(_cap_correction(d))


# ---------------------------------------------------------------------------
# R1


@dataclass(frozen=True)
class R1Scan:
    R1: float
    log_h_at_R1: float
    bracket: tuple[float, float]
    R_start: float
    horizon: float
    doublings: int


def scan_R1(density: RadialDensity, d: int, cfg: QuadratureConfig | None = None) -> R1Scan:
    """Locate the largest crossing of ``log h`` through ``(d/6) log(2/sqrt3)``.

    Starts where ``log h`` is within 1% of its small-radius limit
    ``d log(2/sqrt3)``, doubles the radius until ``log h`` has stayed within
    ``H_ONE_TOL`` of 0 for ``STABLE_DOUBLINGS`` doublings, and refines the
    last bracketed crossing. That window is what "largest" means here; the
    true horizon is unbounded.
    """
    if int(d) != d or d < 2:
        raise DomainError("find_R1 needs d >= 2")
    density.check_dimension(d)
    cfg = _cfg(cfg)
    level = d / 6.0 * LOG_2_OVER_SQRT3
    limit0 = d * LOG_2_OVER_SQRT3

    def log_h(R):
        return h_ratio(density, d, R, cfg).log_value

    R = 1e-2 * density.typical_radius(d)
    for _ in range(200):
        if log_h(R) >= 0.99 * limit0:
            break
        R *= 0.5
    else:
        raise SearchError(f"log h never approached its small-radius limit for {density.label}, d={d}")
    R_start = R

    radii = [R]
    gaps = [log_h(R) - level]
    stable = 0
    doublings = 0
    while stable < STABLE_DOUBLINGS:
        R *= 2.0
        doublings += 1
        if doublings > 400:
            raise SearchError(f"h never settled near 1 for {density.label}, d={d}")
        lh = log_h(R)
        radii.append(R)
        gaps.append(lh - level)
        stable = stable + 1 if abs(lh) <= H_ONE_TOL else 0

    last = None
    for i in range(len(gaps) - 1):
        if gaps[i] >= 0.0 > gaps[i + 1]:
            last = i
    if last is None:
        raise SearchError(f"no crossing of the R1 level within horizon {R:g} for {density.label}, d={d}")
    lo, hi = radii[last], radii[last + 1]
    if gaps[last] == 0.0:
        R1 = lo
    else:
        R1 = brentq(lambda x: log_h(x) - level, lo, hi, xtol=1e-14 * lo, rtol=1e-15, maxiter=200)
    lh1 = log_h(R1)
    if abs(lh1 - level) > R1_LOG_TOL:
        raise SearchError(f"R1 refinement missed the level by {abs(lh1 - level):.3g}")
    return R1Scan(R1, lh1, (lo, hi), R_start, R, doublings)


def find_R1(density: RadialDensity, d: int, cfg: QuadratureConfig | None = None) -> float:
    """Largest ``R`` with ``h(R) = (2/sqrt3)^(d/6)``; see :func:`scan_R1`."""
    return scan_R1(density, d, cfg).R1


# ---------------------------------------------------------------------------
# optimizing the point-mass certificate over R


def _golden_max(fun, a, b, xtol=GOLDEN_XTOL):
    c = b - _INVPHI * (b - a)
    e = a + _INVPHI * (b - a)
    fc, fe = fun(c), fun(e)
    while b - a > xtol:
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, e, fe
            e = a + _INVPHI * (b - a)
            fe = fun(e)
    return (c, fc) if fc >= fe else (e, fe)


def _log_grid(lo, hi, per_decade):
    n = max(2, int(math.ceil(per_decade * math.log10(hi / lo))) + 1)
    return np.geomspace(lo, hi, n)


def _ratio_horizon(density, d, cfg):
    if d >= 2:
        return scan_R1(density, d, cfg).horizon
    # d = 1: out to where the centered interval holds all but 1e-12 of the mass
    total = centered_ball_measure(density, 1, math.inf, cfg) if density.support_radius == math.inf \
        else centered_ball_measure(density, 1, density.support_radius, cfg)
    R = density.typical_radius(1)
    while R < 1e15:
        if total.log_value - centered_ball_measure(density, 1, R, cfg).log_value < 1e-12:
            return 2.0 * R
        R *= 2.0
    return R


def scan_prop1_ratio(density: RadialDensity, d: int, cfg: QuadratureConfig | None = None,
                     per_decade: int = PER_DECADE, horizon: float | None = None):
    """Evaluate ``log prop1_ratio`` on a geometric grid.

    The grid spans ``[1e-3 * typical_radius, horizon]`` and always contains
    the support radius of compactly supported profiles.
    Returns ``(radii, log_ratios)``.
    """
    cfg = _cfg(cfg)
    if horizon is None:
        horizon = _ratio_horizon(density, d, cfg)
    lo = 1e-3 * density.typical_radius(d)
    radii = _log_grid(lo, max(horizon, 10 * lo), per_decade)
    if density.support_radius < math.inf:
        radii = np.unique(np.append(radii, density.support_radius))
    logs = np.array([prop1_ratio(density, d, float(R), cfg).log_value for R in radii])
    return radii, logs


def best_ratio(density: RadialDensity, d: int, cfg: QuadratureConfig | None = None,
               per_decade: int = PER_DECADE, R1: float | None = None):
    """Maximize ``log prop1_ratio`` over ``R``: grid scan, then golden section in ``log R``.

    Returns ``(R_star, log_ratio_star)``; never worse than the value at ``R1``.
    """
    cfg = _cfg(cfg)
    horizon = None
    if d >= 2:
        scan = scan_R1(density, d, cfg)
        horizon = scan.horizon
        R1 = scan.R1 if R1 is None else R1
    radii, logs = scan_prop1_ratio(density, d, cfg, per_decade, horizon)
    if not np.all(np.isfinite(logs)) and np.any(logs == math.inf):
        i = int(np.argmax(logs))
        return float(radii[i]), math.inf
    i = int(np.argmax(logs))
    R_star, best = float(radii[i]), float(logs[i])
    if 0 < i < radii.size - 1:
        x, v = _golden_max(lambda x: prop1_ratio(density, d, math.exp(x), cfg).log_value,
                           math.log(radii[i - 1]), math.log(radii[i + 1]))
        if v > best:
            R_star, best = math.exp(x), v
    if R1 is not None:
        v1 = prop1_ratio(density, d, R1, cfg).log_value
        if v1 > best:
            R_star, best = R1, v1
    return R_star, best


def general_prop1_inf(density: RadialDensity, d: int, t: float, r: float,
                      cfg: QuadratureConfig | None = None, n_grid: int = 65) -> LogNonneg:
    """``mu(B(t e1, r)) / max_{|y - t e1| = r} mu(B(y, r))``.

    The maximum runs over center distances ``|y|`` in ``[|t - r|, t + r]``
    by grid plus golden section; no monotonicity in ``|y|`` is assumed.
    """
    cfg = _cfg(cfg)
    if not (t >= 0 and r > 0):
        raise DomainError("general_prop1_inf needs t >= 0 and r > 0")
    num = offset_ball_measure(density, d, t, r, cfg)
    if num.is_zero:
        raise DomainError("the ball about x has zero measure; x is not in the support")
    lo, hi = abs(t - r), t + r

    def log_m(u):
        return offset_ball_measure(density, d, u, r, cfg).log_value

    if hi - lo <= 0.0:
        best = log_m(lo)
    else:
        us = np.linspace(lo, hi, n_grid)
        vals = np.array([log_m(u) for u in us])
        i = int(np.argmax(vals))
        best = float(vals[i])
        a, b = us[max(i - 1, 0)], us[min(i + 1, n_grid - 1)]
        _, v = _golden_max(log_m, a, b, xtol=GOLDEN_XTOL * max(hi, 1.0))
        best = max(best, v)
    if best == -math.inf:
        return LogNonneg.infinity()
    return LogNonneg(num.log_value - best)


# ---------------------------------------------------------------------------
# restricted Lebesgue measure and d = 1


def lebesgue_ball_bound(d: int) -> tuple[float, float]:
    """Exact ``log(|B^d| / |B^d ∩ B(e1, 1)|)`` and its closed-form lower bound.

    The lens is twice the solid cap ``{x1 >= 1/2}``, whose volume fraction of
    the ball is ``I_{3/4}((d+1)/2, 1/2) / 2``.
    """
    if int(d) != d or d < 2:
        raise DomainError("lebesgue_ball_bound needs d >= 2")
    exact = -log_reg_inc_beta(0.75, 0.5 * (d + 1), 0.5, y=0.25)
    bound = 0.5 * math.log(math.pi * (d + 1) / 6.0) + d * LOG_2_OVER_SQRT3
    return exact, bound


def one_dim_certificate(density: RadialDensity, cfg: QuadratureConfig | None = None,
                        per_decade: int = PER_DECADE) -> float:
    """Supremum over a geometric grid of ``mu([-R, R]) / mu([0, 2R])`` on the line."""
    return _one_dim_scan(density, cfg, per_decade)[1]


def _one_dim_scan(density, cfg, per_decade):
    cfg = _cfg(cfg)
    density.check_dimension(1)
    radii, logs = scan_prop1_ratio(density, 1, cfg, per_decade)
    i = int(np.argmax(logs))
    return float(radii[i]), math.exp(float(logs[i])), float(logs[i])


# ---------------------------------------------------------------------------
# full chains


def _stage(name, fn, *args):
    try:
        return fn(*args)
    except NumericalError as exc:
        raise type(exc)(f"stage {name}: {exc}", exc.partial, exc.achieved) from exc
    except SearchError as exc:
        raise SearchError(f"stage {name}: {exc}") from exc


def scalar_checks(d: int, slack: float) -> list[Check]:
    """Gamma-ratio and cap-area inequalities at dimension ``d``."""
    lhs, rhs = gamma_ratio_check(d)
    checks = [compare("eq4", math.log(lhs), math.log(rhs), "<=", slack)]
    if d >= 2:
        cap = normalized_cap_area(CapSpec(d, 0.5))
        checks.append(compare("eq5_6", math.log(cap), log_cap_area_upper_bound(d), "<=", slack))
    return checks


def verify_theorem_chain(density: RadialDensity, d: int, cfg: QuadratureConfig | None = None,
                         optimize: bool = True) -> BoundReport:
    """Run every inequality of the exponential lower bound at dimension ``d``.

    With ``R = R1``: the inside estimate
    ``mu(B(0,R) ∩ B(R e1,R)) <= (sqrt3/2)^(d/6) mu(B(0,R))``, the outside
    estimate for ``B(R e1,R) \\ B(0,R)`` against the cap-area factor, the
    lens-in-ball containment, the final ratio bound and the scalar
    gamma/cap inequalities. ``optimize`` also runs :func:`best_ratio`.
    """
    if int(d) != d or d < 2:
        raise DomainError("verify_theorem_chain needs d >= 2; use verify_one_dim for d = 1")
    cfg = _cfg(cfg)
    slack = slack_for(cfg)
    scan = _stage("find_R1", scan_R1, density, d, cfg)
    R1 = scan.R1
    cen = _stage("centered", centered_ball_measure, density, d, R1, cfg)
    off = _stage("offset", offset_ball_measure, density, d, R1, R1, cfg)
    inter = _stage("intersection", intersection_measure, density, d, R1, R1, R1, cfg)
    comp = _stage("complement", complement_measure, density, d, R1, R1, R1, cfg)
    lens_ball = _stage("containment", offset_ball_measure, density, d, 0.5 * R1, SQRT3_2 * R1, cfg)

    log_shrink = -d / 6.0 * LOG_2_OVER_SQRT3
    log_bound = theorem_bound_log(d)
    log_ratio = cen.log_value - off.log_value

    checks = [
        compare("eq7", inter.log_value, log_shrink + cen.log_value, "<=", slack),
        compare("eq8", comp.log_value, log_shrink + log_cap_correction(d) + cen.log_value, "<=", slack),
        compare("containment", inter.log_value, lens_ball.log_value, "<=", slack),
        compare("eq3", log_ratio, log_bound, ">=", slack),
        *scalar_checks(d, slack),
    ]
    additivity = abs(float(np.logaddexp(inter.log_value, comp.log_value)) - off.log_value)
    notes = [
        f"R1 is the last crossing up to horizon {scan.horizon:.6g} "
        f"(log h within {H_ONE_TOL:g} of 0 for {STABLE_DOUBLINGS} doublings)",
        f"intersection + complement vs whole: log gap {additivity:.3g}",
    ]
    R_star = log_star = None
    if optimize:
        R_star, log_star = _stage("best_ratio", best_ratio, density, d, cfg, PER_DECADE, R1)
        checks.append(compare("trivial_ge1", log_star, 0.0, ">=", slack))
    else:
        checks.append(compare("trivial_ge1", log_ratio, 0.0, ">=", slack,
                              note="evaluated at R1 only"))
    return BoundReport(
        d=d, density_id=density.label, R1=R1, log_ratio_at_R1=log_ratio,
        R_star=R_star, log_ratio_star=log_star, log_theorem_bound=log_bound,
        checks=checks, quadrature_error=cfg.rel_tol, horizon=scan.horizon, notes=notes,
    )


ONE_DIM_TOL = 1e-6


def verify_one_dim(density: RadialDensity, cfg: QuadratureConfig | None = None,
                   per_decade: int = PER_DECADE) -> BoundReport:
    """The ``d = 1`` certificate ``c_1 >= 2`` in report form."""
    cfg = _cfg(cfg)
    slack = slack_for(cfg)
    R, ratio, log_ratio = _stage("one_dim", _one_dim_scan, density, cfg, per_decade)
    # unbounded support only reaches 2 in the limit
    tol = 0.0 if density.support_radius < math.inf else ONE_DIM_TOL
    log_bound = theorem_bound_log(1)
    checks = [
        compare("oned_ge2", log_ratio, math.log(2.0 - tol), ">=", slack),
        compare("trivial_ge1", log_ratio, 0.0, ">=", slack),
        compare("eq3", log_ratio, log_bound, ">=", slack),
        *scalar_checks(1, slack),
    ]
    return BoundReport(
        d=1, density_id=density.label, R1=R, log_ratio_at_R1=log_ratio,
        R_star=R, log_ratio_star=log_ratio, log_theorem_bound=log_bound,
        checks=checks, quadrature_error=cfg.rel_tol,
        notes=[f"one-dimensional certificate sup ratio {ratio:.12g} at R = {R:.6g}"],
    )
