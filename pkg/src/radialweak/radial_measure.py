"""Measures of balls under radial densities.

Every ball ``B(c, r)`` with ``|c| = t`` is integrated in the radius ``s = |x|``:
the sphere ``S(0, s)`` lies entirely inside the ball for ``s <= r - t`` and
otherwise meets it in a spherical cap whose normalized area is an incomplete
beta value. So

    mu(B(c, r)) = |S^(d-1)| * int f(s) s^(d-1) frac(s) ds

with ``frac`` the cap fraction (1 on the full-sphere band).
"""

from __future__ import annotations

import math

import numpy as np

from .densities import RadialDensity
from .errors import DomainError
from .geometry import log_cap_fraction, log_sphere_area
from .quadrature import QuadratureConfig, log_quad
from .specfun import LogNonneg

__all__ = [
    "QuadratureConfig",
    "total_mass",
    "centered_ball_measure",
    "offset_ball_measure",
    "intersection_measure",
    "complement_measure",
    "shell_measure",
]

TAIL_REL = 1e-16
_MAX_TAIL_DOUBLINGS = 200


def _cfg(cfg):
    return cfg if cfg is not None else QuadratureConfig()


def _radial_log_integrand(density: RadialDensity, d: int):
    k = d - 1

    def logf(s):
        out = density.log_eval(s)
        if k:
            with np.errstate(divide="ignore"):
                out = out + k * np.log(s)
        return out

    return logf


def _points(density, lo, hi):
    inner = [p for p in density.breakpoints() if lo < p < hi]
    return [lo, *inner, hi]


def _log_radial_quad(density, d, lo, hi, cfg) -> float:
    """``log int_lo^hi f(s) s^(d-1) ds`` by quadrature (finite limits)."""
    hi = min(hi, density.support_radius)
    if not hi > lo:
        return -math.inf
    return log_quad(_radial_log_integrand(density, d), _points(density, lo, hi), cfg).log_value


def _log_radial_moment(density, d, R, cfg, method="auto") -> float:
    """``log int_0^R f(s) s^(d-1) ds``."""
    if R <= 0:
        return -math.inf
    if method in ("auto", "closed"):
        v = density.log_radial_moment(d, R)
        if v is not None:
            return v
        if method == "closed":
            raise DomainError(f"{density.label} has no closed-form radial moment")
    if R < math.inf or density.support_radius < math.inf:
        return _log_radial_quad(density, d, 0.0, min(R, density.support_radius), cfg)
    return _log_radial_moment_truncated(density, d, cfg)


def _log_radial_moment_truncated(density, d, cfg) -> float:
    # integrate outward in doubling chunks until the analytic tail bound is
    # TAIL_REL below the running integral
    T = max(density.typical_radius(d), 1e-3)
    acc = _log_radial_quad(density, d, 0.0, T, cfg)
    for _ in range(_MAX_TAIL_DOUBLINGS):
        if density.log_tail_bound(d, T) <= acc + math.log(TAIL_REL):
            return acc
        acc = float(np.logaddexp(acc, _log_radial_quad(density, d, T, 2.0 * T, cfg)))
        T *= 2.0
    raise DomainError(f"tail of {density.label} in dimension {d} never became negligible")


def total_mass(density: RadialDensity, d: int, cfg: QuadratureConfig | None = None,
               method: str = "quad") -> LogNonneg:
    """``mu(R^d)`` in polar coordinates.

    ``method="quad"`` integrates with certified tail truncation;
    ``"auto"`` takes the profile's closed form when it has one.
    """
    density.check_dimension(d)
    cfg = _cfg(cfg)
    return LogNonneg(log_sphere_area(d).log_value + _log_radial_moment(density, d, math.inf, cfg, method))


def centered_ball_measure(density: RadialDensity, d: int, R: float,
                          cfg: QuadratureConfig | None = None, method: str = "auto") -> LogNonneg:
    """``mu(B(0, R))``; closed form when the profile has one unless ``method="quad"``."""
    density.check_dimension(d)
    if not R >= 0:
        raise DomainError(f"radius must be nonnegative, got {R!r}")
    if R == 0:
        return LogNonneg.zero()
    return LogNonneg(log_sphere_area(d).log_value + _log_radial_moment(density, d, R, _cfg(cfg), method))


def _log_cap_band(density, d, t, r, lo, hi, cfg) -> float:
    """``log int_lo^hi f(s) s^(d-1) frac(s) ds`` over a partial-cap band."""
    hi = min(hi, density.support_radius)
    if not hi > lo:
        return -math.inf
    radial = _radial_log_integrand(density, d)

    def logf(s):
        with np.errstate(divide="ignore", invalid="ignore"):
            st2 = 2.0 * s * t
            # 1 - c and 1 + c from the differences s - t and s - r, which are
            # exact near the band ends; forming s^2 + t^2 - r^2 directly
            # cancels catastrophically when t or r is small
            u, v = s - r, s - t
            one_minus = (r - v) * (r + v) / st2
            one_plus = (t + u) * (s + t + r) / st2
            c = np.where(one_minus <= 1.0, 1.0 - one_minus, one_plus - 1.0)
            x = one_minus * one_plus
        return radial(s) + log_cap_fraction(d, c, x)

    return log_quad(logf, _points(density, lo, hi), cfg).log_value


def _log_ball_slab(density, d, t, r, lo, hi, cfg) -> float:
    """``log int`` of the ball's radial profile restricted to ``lo <= s <= hi``."""
    parts = []
    full_hi = min(hi, r - t)
    if full_hi > lo:
        if lo == 0.0:
            parts.append(_log_radial_moment(density, d, full_hi, cfg))
        else:
            parts.append(_log_radial_quad(density, d, lo, full_hi, cfg))
    if t > 0:
        band_lo = max(lo, abs(t - r))
        band_hi = min(hi, t + r)
        parts.append(_log_cap_band(density, d, t, r, band_lo, band_hi, cfg))
    if not parts:
        return -math.inf
    return float(np.logaddexp.reduce(parts))


def _check_ball(density, d, t, r):
    density.check_dimension(d)
    if not t >= 0:
        raise DomainError(f"center distance must be nonnegative, got {t!r}")
    if not r > 0:
        raise DomainError(f"ball radius must be positive, got {r!r}")


def _log_interval_1d(density, lo, hi, cfg) -> float:
    """``log int_lo^hi f(|s|) ds`` on the line."""
    if lo == 0:
        return _log_radial_moment(density, 1, hi, cfg)
    if lo > 0:
        return _log_radial_quad(density, 1, lo, hi, cfg)
    if hi <= 0:
        return _log_radial_quad(density, 1, -hi, -lo, cfg)
    return float(np.logaddexp(_log_radial_moment(density, 1, -lo, cfg),
                              _log_radial_moment(density, 1, hi, cfg)))


def shell_measure(density: RadialDensity, d: int, t: float, r: float, lo: float, hi: float,
                  cfg: QuadratureConfig | None = None) -> LogNonneg:
    """``mu(B(c, r) ∩ {lo <= |x| <= hi})`` for ``|c| = t``."""
    _check_ball(density, d, t, r)
    cfg = _cfg(cfg)
    lo = max(lo, 0.0)
    if not hi > lo:
        return LogNonneg.zero()
    if d == 1:
        # B(c, r) = [t - r, t + r]; the shell is [-hi, -lo] ∪ [lo, hi]
        parts = []
        for a, b in ((t - r, t + r), (-(t + r), -(t - r))):
            a, b = max(a, lo), min(b, hi)
            if b > a:
                parts.append(_log_radial_quad(density, 1, a, b, cfg))
        if not parts:
            return LogNonneg.zero()
        return LogNonneg(float(np.logaddexp.reduce(parts)))
    return LogNonneg(log_sphere_area(d).log_value + _log_ball_slab(density, d, t, r, lo, hi, cfg))


def offset_ball_measure(density: RadialDensity, d: int, t: float, r: float,
                        cfg: QuadratureConfig | None = None) -> LogNonneg:
    """``mu(B(c, r))`` for any center with ``|c| = t``."""
    _check_ball(density, d, t, r)
    cfg = _cfg(cfg)
    if d == 1:
        return LogNonneg(_log_interval_1d(density, t - r, t + r, cfg))
    if t == 0:
        return centered_ball_measure(density, d, r, cfg)
    return LogNonneg(log_sphere_area(d).log_value + _log_ball_slab(density, d, t, r, 0.0, t + r, cfg))


def intersection_measure(density: RadialDensity, d: int, R: float, t: float, r: float,
                         cfg: QuadratureConfig | None = None) -> LogNonneg:
    """``mu(B(0, R) ∩ B(c, r))``."""
    _check_ball(density, d, t, r)
    if not R >= 0:
        raise DomainError(f"radius must be nonnegative, got {R!r}")
    if R == 0:
        return LogNonneg.zero()
    if d == 1:
        return LogNonneg(_log_interval_1d(density, max(t - r, -R), min(t + r, R), _cfg(cfg))) \
            if min(t + r, R) > max(t - r, -R) else LogNonneg.zero()
    return shell_measure(density, d, t, r, 0.0, R, cfg)


def complement_measure(density: RadialDensity, d: int, R: float, t: float, r: float,
                       cfg: QuadratureConfig | None = None) -> LogNonneg:
    """``mu(B(c, r) \\ B(0, R))``, integrated directly rather than by subtraction."""
    if not R >= 0:
        raise DomainError(f"radius must be nonnegative, got {R!r}")
    if R >= t + r:
        _check_ball(density, d, t, r)
        return LogNonneg.zero()
    if d == 1:
        # open shell |x| > R; the boundary points carry no mass
        return shell_measure(density, 1, t, r, R, t + r, cfg)
    return shell_measure(density, d, t, r, R, t + r, cfg)
