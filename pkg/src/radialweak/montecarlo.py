"""Monte Carlo estimates of ball measures, used as an independent oracle.

Points are drawn as ``X = s * theta`` with ``theta`` uniform on the sphere
(a normalized Gaussian vector) and ``s`` from the radial law
``f(s) s^(d-1)``. Only the first coordinate of ``theta`` enters
``|X - t e1|``, so it is sampled as ``g1 / sqrt(g1^2 + chi2_(d-1))``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .densities import Gaussian, RadialDensity
from .errors import DomainError
from .geometry import log_sphere_area
from .radial_measure import total_mass
from .specfun import LogNonneg

__all__ = ["MCEstimate", "RadialSampler", "mc_ball_measure", "z_score"]

MIN_SAMPLES = 1000
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_LOG_GL_W = np.log(_GL_W)


@dataclass(frozen=True)
class MCEstimate:
    estimate: LogNonneg
    std_err: float
    rel_std_err: float
    hits: int
    n: int
    degenerate: str | None = None


class RadialSampler:
    """Inverse-CDF sampler for the radial law ``f(s) s^(d-1)`` on a quantile grid."""

    def __init__(self, density: RadialDensity, d: int, n_cells: int = 8192, mass_cut: float = 1e-13):
        density.check_dimension(d)
        self.density = density
        self.d = d
        top = self._truncation(mass_cut)
        kinks = [p for p in density.breakpoints() if 0 < p < top]
        scale = density.typical_radius(d)
        coarse = np.unique(np.concatenate((
            [0.0, top], kinks,
            np.linspace(0.0, top, 513),
            np.geomspace(min(scale, top) * 1e-6, top, 513),
        )))
        cdf = self._cdf(coarse)
        q = np.linspace(0.0, 1.0, n_cells + 1)
        placed = np.interp(q, cdf, coarse)
        self.grid = np.unique(np.concatenate((coarse, placed)))
        self.cdf = self._cdf(self.grid)

    def _truncation(self, mass_cut):
        density, d = self.density, self.d
        if density.support_radius < math.inf:
            return density.support_radius
        # tail bounds are radial integrals, without the sphere area
        log_radial = total_mass(density, d, method="auto").log_value - log_sphere_area(d).log_value
        T = max(density.typical_radius(d), 1.0)
        while density.log_tail_bound(d, T) > log_radial + math.log(mass_cut):
            T *= 2.0
        return T

    def _cdf(self, edges):
        a, b = edges[:-1], edges[1:]
        half = 0.5 * (b - a)
        x = 0.5 * (a + b)[:, None] + half[:, None] * _GL_X[None, :]
        logv = self.density.log_eval(x)
        if self.d > 1:
            with np.errstate(divide="ignore"):
                logv = logv + (self.d - 1) * np.log(x)
        with np.errstate(divide="ignore"):
            logm = np.log(half) + np.logaddexp.reduce(logv + _LOG_GL_W, axis=1)
        m = np.exp(logm - np.max(logm))
        cdf = np.concatenate(([0.0], np.cumsum(m)))
        return cdf / cdf[-1]

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.random(n)
        i = np.clip(np.searchsorted(self.cdf, u, side="right") - 1, 0, self.grid.size - 2)
        lo, hi = self.cdf[i], self.cdf[i + 1]
        w = np.where(hi > lo, (u - lo) / np.where(hi > lo, hi - lo, 1.0), 0.5)
        return self.grid[i] + w * (self.grid[i + 1] - self.grid[i])


def _first_direction_cosine(rng, d, n):
    g = rng.standard_normal(n)
    if d == 1:
        return np.sign(g)
    rest = rng.chisquare(d - 1, n)
    return g / np.sqrt(g * g + rest)


def mc_ball_measure(density: RadialDensity, d: int, t: float, r: float, n: int,
                    seed, sampler: RadialSampler | None = None) -> MCEstimate:
    """Hit-or-miss estimate of ``mu(B(t e1, r))``.

    ``seed`` is an int or a :class:`numpy.random.Generator`; the result is
    deterministic given it. Fewer than ``MIN_SAMPLES`` draws is allowed but
    warned about.
    """
    density.check_dimension(d)
    if not (t >= 0 and r > 0):
        raise DomainError("mc_ball_measure needs t >= 0 and r > 0")
    n = int(n)
    if n < 1:
        raise DomainError("mc_ball_measure needs n >= 1")
    if n < MIN_SAMPLES:
        warnings.warn(f"only {n} Monte Carlo samples; the agreement test has little power", stacklevel=2)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    if isinstance(density, Gaussian):
        sig = density.scale
        x1 = sig * rng.standard_normal(n)
        rest = sig * sig * rng.chisquare(d - 1, n) if d > 1 else 0.0
        dist2 = (x1 - t) ** 2 + rest
    else:
        sampler = sampler or RadialSampler(density, d)
        s = sampler.sample(rng, n)
        u1 = _first_direction_cosine(rng, d, n)
        dist2 = s * s + t * t - 2.0 * s * t * u1
    hits = int(np.count_nonzero(dist2 <= r * r))

    total = total_mass(density, d, method="auto")
    p = hits / n
    rel_se = math.sqrt((1.0 - p) / (p * n)) if hits else math.inf
    degenerate = None
    if hits == 0:
        degenerate = "no-hit"
    elif hits == n:
        degenerate = "all-hit"
    estimate = LogNonneg(total.log_value + math.log(p)) if hits else LogNonneg.zero()
    std_err = math.sqrt(p * (1.0 - p) / n) * total.to_float()
    return MCEstimate(estimate, std_err, rel_se, hits, n, degenerate)


def z_score(quad: LogNonneg, mc: MCEstimate) -> float:
    """``(quad - mc) / std_err`` computed through log ratios."""
    if mc.degenerate == "all-hit":
        return 0.0 if abs(quad.log_value - mc.estimate.log_value) < 1e-9 else math.inf
    if mc.hits == 0:
        return math.inf if not quad.is_zero else 0.0
    return math.expm1(quad.log_value - mc.estimate.log_value) / mc.rel_std_err
