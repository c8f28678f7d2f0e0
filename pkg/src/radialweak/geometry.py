"""Balls, spheres and spherical caps in R^d, in log space where it matters."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import LogNonneg, log_gamma, log_reg_inc_beta

__all__ = [
    "CapSpec",
    "INSIDE",
    "OUTSIDE",
    "log_ball_volume",
    "log_sphere_area",
    "log_cap_fraction",
    "normalized_cap_area",
    "cap_area_upper_bound",
    "log_cap_area_upper_bound",
    "gamma_ratio_check",
    "cap_cos_angle",
]

LOG_PI = math.log(math.pi)
INSIDE = "inside"
OUTSIDE = "outside"


@dataclass(frozen=True)
class CapSpec:
    """The cap ``{theta on S^(d-1): <theta, v> >= eps}``."""

    d: int
    eps: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"cap dimension must be a positive integer, got {self.d!r}")
        if not 0.0 <= self.eps < 1.0:
            raise DomainError(f"cap threshold must lie in [0, 1), got {self.eps!r}")


def _check_dim(d, least=1):
    if int(d) != d or d < least:
        raise DomainError(f"dimension must be an integer >= {least}, got {d!r}")
    return int(d)


def log_ball_volume(d: int) -> LogNonneg:
    """``log(pi^(d/2) / Gamma(1 + d/2))``, the volume of the unit ball."""
    d = _check_dim(d)
    return LogNonneg(0.5 * d * LOG_PI - log_gamma(1.0 + 0.5 * d))


def log_sphere_area(d: int) -> LogNonneg:
    """Area of ``S^(d-1)``: ``d`` times the ball volume; 2 points when ``d = 1``."""
    d = _check_dim(d)
    if d == 1:
        return LogNonneg(math.log(2.0))
    return LogNonneg(math.log(d) + log_ball_volume(d).log_value)


def log_cap_fraction(d: int, c, x=None):
    """Log of the normalized area of ``{<theta, e> >= c}`` on ``S^(d-1)``.

    Vectorized over ``c`` in ``[-1, 1]``. ``x`` may carry ``1 - c^2`` computed
    without cancellation. Needs ``d >= 2``; ``d = 2`` uses the arc length
    ``arccos(c) / pi`` directly.
    """
    d = _check_dim(d, 2)
    c = np.clip(np.asarray(c, dtype=float), -1.0, 1.0)
    if x is None:
        x = (1.0 - c) * (1.0 + c)
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    if d == 2:
        # arccos(c), resolved through sin = sqrt(x) near c = +-1
        with np.errstate(divide="ignore"):
            return np.log(np.arctan2(np.sqrt(x), c)) - LOG_PI
    a = 0.5 * (d - 1)
    log_half_i = math.log(0.5) + log_reg_inc_beta(x, a, 0.5, y=c * c)
    with np.errstate(divide="ignore"):
        return np.where(c >= 0.0, log_half_i, np.log1p(-np.exp(log_half_i)))


def normalized_cap_area(cap: CapSpec) -> float:
    """Normalized area of the cap ``C(eps, v)``: ``I_{1-eps^2}((d-1)/2, 1/2) / 2``."""
    if cap.d < 2:
        raise DomainError("normalized_cap_area needs d >= 2; d = 1 is a two-point sphere")
    return float(np.exp(log_cap_fraction(cap.d, cap.eps)))


def log_cap_area_upper_bound(d: int) -> float:
    """Log of ``(sqrt3/2)^d * 2 sqrt2 / sqrt(3 pi d) * sqrt(1 + 1/d)``."""
    d = _check_dim(d, 2)
    return (
        d * math.log(math.sqrt(3.0) / 2.0)
        + math.log(2.0 * math.sqrt(2.0))
        - 0.5 * math.log(3.0 * math.pi * d)
        + 0.5 * math.log1p(1.0 / d)
    )


def cap_area_upper_bound(d: int) -> float:
    return math.exp(log_cap_area_upper_bound(d))


def gamma_ratio_check(d: int) -> tuple[float, float]:
    """``(Gamma(1+d/2)/Gamma((1+d)/2), sqrt((d+1)/2))``; the first never exceeds the second."""
    d = _check_dim(d)
    lhs = math.exp(log_gamma(1.0 + 0.5 * d) - log_gamma(0.5 + 0.5 * d))
    return lhs, math.sqrt(0.5 * (d + 1))


def cap_cos_angle(s: float, t: float, r: float):
    """Where the sphere ``S(0, s)`` meets the closed ball ``B(c, r)``, ``|c| = t``.

    Returns :data:`INSIDE` when the whole sphere lies in the ball,
    :data:`OUTSIDE` when they share no positive-area part, and otherwise the
    cosine of the cap's angular radius seen from the origin.
    """
    if not (s > 0 and t >= 0 and r > 0):
        raise DomainError("cap_cos_angle needs s > 0, t >= 0, r > 0")
    if s <= r - t:
        return INSIDE
    if s >= t + r or s <= t - r:
        return OUTSIDE
    return min(1.0, max(-1.0, (s * s + t * t - r * r) / (2.0 * s * t)))
