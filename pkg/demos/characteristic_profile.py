"""
Characteristic profile of a meromorphic function
================================================

Sweep the proximity / counting split of T(r) for y = e^z/(z-1) and
estimate its pole deficiency from the tail of the grid.
"""

import numpy as np

from merogrowth import (
    RadiusGrid,
    characteristic,
    estimate_deficiency,
    named_function,
)

y = named_function("exp_over_zminus1", working_radius=5000.0)

grid = RadiusGrid.logspace(2.0, 2000.0, 8)
profile = characteristic(y, grid)

print(f"{'r':>10}  {'m(r)':>12}  {'N(r)':>10}  {'T(r)':>12}  {'T/(r/pi)':>9}")
for rec in profile.records:
    print(f"{rec.r:>10.1f}  {rec.m:>12.4f}  {rec.N:>10.4f}  "
          f"{rec.T:>12.4f}  {rec.T / (rec.r / np.pi):>9.4f}")

# the single pole is negligible against the e^z growth, so the pole
# deficiency tends to 1
est = estimate_deficiency(y, grid)
print(f"\nestimated delta(pole) = {est.value:.4f}"
      f"  (from {est.n_radii} radii in [{est.r_lo:.0f}, {est.r_hi:.0f}])")
