"""
Area-preserving barriers and large-k reflection
===============================================

With the total area V_0 L fixed the height grows as V_G = V_0 L / (2**G l_G).
The reflection converges in G.  At large k it falls off as a power of k,
here measured on the envelope between resonances.
"""
import numpy as np

from svc_tunneling.analysis import rg_convergence, scaling_fit
from svc_tunneling.geometry import SvcParams, barrier_height

p = SvcParams(3.5, 5, 10.0, 1.0, area_preserving=True)
print("V_5 =", barrier_height(p))

k = np.linspace(1, 100, 20_000)
for pair, d in zip([(4, 5), (5, 10), (10, 15)], rg_convergence(p, [4, 5, 10, 15], k)):
    print(f"sup |R_{pair[0]} - R_{pair[1]}| = {d:.2e}")

for v0 in (10.0, 40.0):
    for g in (0, 5):
        fit = scaling_fit(SvcParams(3.5, g, v0, 1.0, area_preserving=True), (50, 500))
        print(f"V0={v0:g} G={g}: slope {fit.slope:.3f}, rms residual {fit.residual:.2f}, "
              f"{fit.n_points} envelope points")
