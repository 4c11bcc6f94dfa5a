"""
Building an SVC(rho) barrier
============================

Stage G splits the barrier 2**G times.  At each step a middle piece of
relative size 1/rho**j is removed, so every segment has the same width l_G.
"""
import numpy as np

from svc_tunneling import geometry as geo
from svc_tunneling.geometry import SvcParams

# The stage-2 construction on the unit interval with rho = 2
p = SvcParams(rho=2.0, stage=2, height=20.0, span=1.0)
layout = geo.build_layout(p)
for start, width in layout.segments:
    print(f"segment at {start:.5f}  width {width:.5f}")

# The same width from the q-Pochhammer closed form, and the spacings s_1..s_G
print("l_G =", geo.segment_length(p))
print("s_p =", geo.spacings(p))

# The occupied fraction 2**G l_G / L shrinks with G; faster for small rho
for rho in (1.5, 2.5, 8.0):
    frac = [2 ** g * geo.segment_length(SvcParams(rho, g, 1.0, 1.0)) for g in range(0, 11, 2)]
    print(f"rho={rho}:", np.round(frac, 4))
