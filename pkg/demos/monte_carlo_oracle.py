"""Cross-check off-center ball quadrature against Monte Carlo.

Points are drawn from the normalized radial measure (radius by inverse CDF,
direction uniform), so the hit fraction estimates mu(B) / mu(R^d).
"""

import numpy as np

from radialweak import PowerTail, QuadratureConfig, mc_ball_measure, offset_ball_measure
from radialweak.cli import mc_configurations
from radialweak.montecarlo import z_score

cfg = QuadratureConfig(rel_tol=1e-10)
seed = 2024

for d in (2, 5, 20):
    density = PowerTail(d + 2.0)
    for k, (t, r) in enumerate(mc_configurations(density, d, 3, seed)):
        exact = offset_ball_measure(density, d, t, r, cfg)
        mc = mc_ball_measure(density, d, t, r, 200_000, np.random.default_rng([seed, d, k]))
        print(f"d={d:2d}  t={t:7.3f}  r={r:7.3f}  quad={exact.to_float():.6e}"
              f"  mc={mc.estimate.to_float():.6e}  z={z_score(exact, mc):+.2f}")
