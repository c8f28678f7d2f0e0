"""Nonincreasing radial density profiles ``f`` on ``[0, inf)``.

A profile knows its log-density, where it has kinks, an upper bound on its
radial tail ``int_T^inf f(s) s^(d-1) ds`` and, when one exists, a closed form
for the radial moment ``int_0^R f(s) s^(d-1) ds``.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import DomainError
from .specfun import (
    log_beta,
    log_gamma,
    log_reg_inc_beta,
    log_reg_lower_inc_gamma,
    log_reg_upper_inc_gamma,
)

__all__ = [
    "RadialDensity",
    "Gaussian",
    "Exponential",
    "IndicatorBall",
    "PowerTail",
    "Tabulated",
    "parse_density",
]


class RadialDensity:
    """Base class; subclasses implement :meth:`log_eval`."""

    support_radius = math.inf

    @property
    def label(self) -> str:
        raise NotImplementedError

    def log_eval(self, s):
        raise NotImplementedError

    def eval(self, s):
        return np.exp(self.log_eval(s))

    def check_dimension(self, d: int) -> None:
        """Reject dimensions where ``f(s) s^(d-1)`` is not integrable."""
        if int(d) != d or d < 1:
            raise DomainError(f"dimension must be a positive integer, got {d!r}")

    def breakpoints(self) -> tuple[float, ...]:
        """Radii where ``f`` is not smooth."""
        return ()

    def typical_radius(self, d: int) -> float:
        """A length scale of the radial law at dimension ``d``; seeds searches."""
        raise NotImplementedError

    def log_radial_moment(self, d: int, R: float) -> float | None:
        """Closed-form ``log int_0^R f(s) s^(d-1) ds`` or ``None``."""
        return None

    def log_tail_bound(self, d: int, T: float) -> float:
        """Upper bound on ``log int_T^inf f(s) s^(d-1) ds``."""
        if T >= self.support_radius:
            return -math.inf
        raise NotImplementedError

    def dilate(self, c: float) -> RadialDensity:
        """The profile ``s -> f(s / c)``."""
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.label})"


def _log_s_power(s, k):
    # (d-1) * log s with the d = 1 convention 0 * log 0 = 0
    if k == 0:
        return np.zeros_like(s)
    with np.errstate(divide="ignore"):
        return k * np.log(s)


class Gaussian(RadialDensity):
    """``f(s) = exp(-s^2 / (2 scale^2))``."""

    def __init__(self, scale: float = 1.0):
        if not scale > 0:
            raise DomainError("Gaussian scale must be positive")
        self.scale = float(scale)

    @property
    def label(self):
        return "gaussian" if self.scale == 1.0 else f"gaussian:{self.scale:g}"

    def log_eval(self, s):
        s = np.asarray(s, dtype=float)
        return -0.5 * (s / self.scale) ** 2

    def typical_radius(self, d):
        return self.scale * math.sqrt(d)

    def _log_norm(self, d):
        # int_0^inf exp(-s^2/2 scale^2) s^(d-1) ds
        return d * math.log(self.scale) + (0.5 * d - 1.0) * math.log(2.0) + log_gamma(0.5 * d)

    def log_radial_moment(self, d, R):
        if R == 0:
            return -math.inf
        if R == math.inf:
            return self._log_norm(d)
        return self._log_norm(d) + log_reg_lower_inc_gamma(0.5 * d, 0.5 * (R / self.scale) ** 2)

    def log_tail_bound(self, d, T):
        return self._log_norm(d) + log_reg_upper_inc_gamma(0.5 * d, 0.5 * (T / self.scale) ** 2)

    def dilate(self, c):
        return Gaussian(self.scale * c)


class Exponential(RadialDensity):
    """``f(s) = exp(-s / scale)``."""

    def __init__(self, scale: float = 1.0):
        if not scale > 0:
            raise DomainError("Exponential scale must be positive")
        self.scale = float(scale)

    @property
    def label(self):
        return "exponential" if self.scale == 1.0 else f"exponential:{self.scale:g}"

    def log_eval(self, s):
        return -np.asarray(s, dtype=float) / self.scale

    def typical_radius(self, d):
        return self.scale * d

    def _log_norm(self, d):
        return d * math.log(self.scale) + log_gamma(d)

    def log_radial_moment(self, d, R):
        if R == 0:
            return -math.inf
        if R == math.inf:
            return self._log_norm(d)
        return self._log_norm(d) + log_reg_lower_inc_gamma(d, R / self.scale)

    def log_tail_bound(self, d, T):
        return self._log_norm(d) + log_reg_upper_inc_gamma(d, T / self.scale)

    def dilate(self, c):
        return Exponential(self.scale * c)


class IndicatorBall(RadialDensity):
    """``f = 1`` on ``[0, radius]`` and 0 beyond: Lebesgue measure on a ball."""

    def __init__(self, radius: float = 1.0):
        if not radius > 0:
            raise DomainError("IndicatorBall radius must be positive")
        self.radius = float(radius)
        self.support_radius = self.radius

    @property
    def label(self):
        return f"indicator:{self.radius:g}"

    def log_eval(self, s):
        s = np.asarray(s, dtype=float)
        return np.where(s <= self.radius, 0.0, -np.inf)

    def breakpoints(self):
        return (self.radius,)

    def typical_radius(self, d):
        return self.radius

    def log_radial_moment(self, d, R):
        if R == 0:
            return -math.inf
        return d * math.log(min(R, self.radius)) - math.log(d)

    def dilate(self, c):
        return IndicatorBall(self.radius * c)


class PowerTail(RadialDensity):
    """``f(s) = (1 + s)^(-p)``; integrable against ``s^(d-1)`` only for ``p > d``."""

    def __init__(self, p: float):
        if not p > 0:
            raise DomainError("PowerTail exponent must be positive")
        self.p = float(p)

    @property
    def label(self):
        return f"powertail:{self.p:g}"

    def check_dimension(self, d):
        super().check_dimension(d)
        if not self.p > d:
            raise DomainError(f"PowerTail({self.p:g}) has infinite mass in dimension {d}: needs p > d")

    def log_eval(self, s):
        return -self.p * np.log1p(np.asarray(s, dtype=float))

    def typical_radius(self, d):
        # mean of s = u/(1-u) with u ~ Beta(d, p-d), when finite
        return d / max(self.p - d - 1.0, 1.0)

    def log_radial_moment(self, d, R):
        # substitute u = s/(1+s): int_0^{R/(1+R)} u^(d-1) (1-u)^(p-d-1) du
        self.check_dimension(d)
        if R == 0:
            return -math.inf
        lb = log_beta(d, self.p - d)
        if R == math.inf:
            return lb
        return lb + log_reg_inc_beta(R / (1.0 + R), d, self.p - d, y=1.0 / (1.0 + R))

    def log_tail_bound(self, d, T):
        # s^(d-1) <= (1+s)^(d-1)
        return (d - self.p) * math.log1p(T) - math.log(self.p - d)


class Tabulated(RadialDensity):
    """Piecewise-linear profile through ``(radius, value)`` samples.

    Values must be nonincreasing; the profile is flat before the first radius
    and zero after the last one.
    """

    def __init__(self, radii, values, name: str = "tabulated"):
        radii = np.asarray(radii, dtype=float)
        values = np.asarray(values, dtype=float)
        if radii.ndim != 1 or radii.shape != values.shape or radii.size < 2:
            raise DomainError("tabulated profile needs two equal-length columns with at least 2 rows")
        if np.any(~np.isfinite(radii)) or np.any(~np.isfinite(values)):
            raise DomainError("tabulated profile has non-finite entries")
        if radii[0] < 0 or np.any(np.diff(radii) <= 0):
            raise DomainError("tabulated radii must be nonnegative and strictly increasing")
        if np.any(values < 0):
            raise DomainError("tabulated density values must be nonnegative")
        if np.any(np.diff(values) > 0):
            raise DomainError("tabulated density increases somewhere; profile must be nonincreasing")
        if values[0] == 0:
            raise DomainError("tabulated density is identically zero")
        self.radii = radii
        self.values = values
        self.name = name
        last = np.flatnonzero(values > 0)[-1]
        # the support ends where the profile reaches zero, or at the last sample
        self.support_radius = float(radii[min(last + 1, radii.size - 1)])

    @classmethod
    def from_file(cls, path) -> Tabulated:
        """Load whitespace-separated ``radius value`` rows."""
        path = Path(path)
        try:
            data = np.loadtxt(path, ndmin=2)
        except (OSError, ValueError) as exc:
            raise DomainError(f"cannot read tabulated density {path}: {exc}") from exc
        if data.shape[1] != 2:
            raise DomainError(f"{path}: expected 2 columns, found {data.shape[1]}")
        return cls(data[:, 0], data[:, 1], name=f"tabulated:{path.name}")

    @property
    def label(self):
        return self.name

    def log_eval(self, s):
        s = np.asarray(s, dtype=float)
        v = np.interp(s, self.radii, self.values)
        v = np.where(s > self.radii[-1], 0.0, v)
        with np.errstate(divide="ignore"):
            return np.log(v)

    def breakpoints(self):
        return tuple(float(r) for r in self.radii if r <= self.support_radius)

    def typical_radius(self, d):
        return self.support_radius

    def dilate(self, c):
        return Tabulated(self.radii * c, self.values, name=f"{self.name}*{c:g}")


def parse_density(spec: str) -> RadialDensity:
    """Build a profile from ``name[:param]``.

    ``gaussian``, ``exponential``, ``indicator:R0``, ``powertail:p``,
    ``tabulated:PATH`` (or a bare path to an existing file).
    """
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    try:
        if name == "gaussian":
            return Gaussian(float(arg) if arg else 1.0)
        if name == "exponential":
            return Exponential(float(arg) if arg else 1.0)
        if name == "indicator":
            return IndicatorBall(float(arg) if arg else 1.0)
        if name == "powertail":
            if not arg:
                raise DomainError("powertail needs an exponent, e.g. powertail:8")
            return PowerTail(float(arg))
    except ValueError as exc:
        raise DomainError(f"bad density parameter in {spec!r}") from exc
    if name == "tabulated":
        return Tabulated.from_file(arg)
    if Path(spec).is_file():
        return Tabulated.from_file(spec)
    raise DomainError(f"unknown density {spec!r}")
