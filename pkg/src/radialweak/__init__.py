"""Measures of balls under radial densities in R^d and lower-bound
certificates for the weak type (1,1) constants of the associated centered
maximal operators."""

from .bounds import (
    BoundReport,
    Check,
    best_ratio,
    delta_maximal_value,
    find_R1,
    general_prop1_inf,
    h_ratio,
    lebesgue_ball_bound,
    one_dim_certificate,
    prop1_ratio,
    theorem_bound_log,
    verify_one_dim,
    verify_theorem_chain,
)
from .densities import Exponential, Gaussian, IndicatorBall, PowerTail, RadialDensity, Tabulated, parse_density
from .errors import DomainError, NumericalError, QuadratureError, SearchError
from .geometry import (
    CapSpec,
    cap_area_upper_bound,
    cap_cos_angle,
    gamma_ratio_check,
    log_ball_volume,
    log_sphere_area,
    normalized_cap_area,
)
from .montecarlo import MCEstimate, mc_ball_measure
from .quadrature import QuadratureConfig
from .radial_measure import (
    centered_ball_measure,
    complement_measure,
    intersection_measure,
    offset_ball_measure,
    total_mass,
)
from .specfun import LogNonneg, log_gamma, reg_inc_beta, reg_lower_inc_gamma, sin_power_integral

__version__ = "0.1.0"
