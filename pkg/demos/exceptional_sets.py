"""
Exceptional sets and their logarithmic density
==============================================

Build annular exclusion disks around the zeros of sin z, project them to
the radial axis, and compare the measured log-density against the ceiling
16 eta e^{5/2} / (1 + log 2).
"""

import math

import numpy as np

from merogrowth import (
    ALPHA,
    build_annular_disks,
    density_ceiling,
    log_density,
    radial_projection,
)

eta = 0.004
ks = np.arange(1, 319)  # all zeros k*pi with |z| < 1000
zeros = [(0.0j, 1)]
zeros += [(complex(s * k * math.pi, 0.0), 1) for k in ks for s in (1, -1)]

disks = build_annular_disks(zeros, eta, ALPHA)
eset = radial_projection(disks, ALPHA)
ceiling = density_ceiling(eta)

print(f"zeros: {len(zeros)}, disks: {len(disks.disks)}, "
      f"radial intervals: {len(eset.intervals)}")
print(f"density ceiling at eta={eta}: {ceiling:.5f}\n")

print(f"{'r':>8}  {'log-measure':>12}  {'log-density':>12}  {'headroom':>9}")
for r in np.geomspace(5.0, 1000.0, 7):
    lm = eset.log_measure(float(r))
    d = log_density(eset, float(r))
    print(f"{r:>8.1f}  {lm:>12.5f}  {d:>12.5f}  {ceiling - d:>9.5f}")
