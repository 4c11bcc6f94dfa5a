"""
Stage saturation
================

Raising G changes the spectrum less and less.  The metric is the largest
pointwise change of T between two stages on a fixed grid.
"""
import numpy as np

from svc_tunneling.analysis import saturation_metric
from svc_tunneling.geometry import SvcParams

grid = np.linspace(0.1, 15, 2000)
base = SvcParams(6.0, 0, 20.0, 15.0)
for g in range(1, 9):
    print(f"G={g} -> {g + 1}: {saturation_metric(base, g, g + 1, grid):.3e}")
print("metric(2, 4) =", saturation_metric(base, 2, 4, grid))
print("metric(6, 8) =", saturation_metric(base, 6, 8, grid))
