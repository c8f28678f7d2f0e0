"""On the line every radial density forces a weak-type ratio of at least 2.

The scan below evaluates the one-dimensional ratio over a grid of radii and
reports the best value found for several profiles.
"""

from radialweak import Exponential, Gaussian, IndicatorBall, PowerTail, QuadratureConfig, one_dim_certificate

cfg = QuadratureConfig(rel_tol=1e-10)

for density in (Gaussian(), Exponential(), IndicatorBall(1.0), PowerTail(3.0)):
    print(f"{density.label:16s} certificate {one_dim_certificate(density, cfg):.9f}")
