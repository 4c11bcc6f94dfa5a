"""
Cost per wavenumber
===================

The closed form grows roughly linearly in G.  The explicit product doubles
with every stage.
"""
import numpy as np

from svc_tunneling.analysis import benchmark
from svc_tunneling.geometry import SvcParams

rep = benchmark(SvcParams(2.5, 1, 20.0, 15.0), np.linspace(0.05, 15, 200),
                stages=range(1, 13), repeats=5, oracle_max_stage=12)
print(" G   closed ns/pt   oracle ns/pt   oracle ratio")
for row in rep["stages"]:
    ratio = row.get("oracle_ratio")
    print(f"{row['stage']:2d}   {row['closed_ns']:12.0f}   {row['oracle_ns']:12.0f}   "
          + ("" if ratio is None else f"{ratio:.2f}"))
