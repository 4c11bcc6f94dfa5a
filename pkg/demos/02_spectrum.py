"""
Transmission spectrum and the brute-force check
===============================================

Units: hbar^2 / 2m = 1, so the energy is k**2.  The closed form costs O(G)
per wavenumber.  The oracle multiplies one matrix per region, 2**(G+1) + 1 of them.
"""
import numpy as np

from svc_tunneling.analysis import sweep
from svc_tunneling.geometry import SvcParams

p = SvcParams(rho=2.5, stage=4, height=20.0, span=15.0)

closed = sweep(p, 0.05, 15.0, 2000, method="closed")
brute = sweep(p, 0.05, 15.0, 2000, method="oracle")
print("max |T_closed - T_oracle| =", np.max(np.abs(closed.t - brute.t)))

# Below the barrier top (k < sqrt(20)) transmission is mostly suppressed,
# apart from isolated resonances.
below = closed.k < np.sqrt(20.0)
print("mean T below the top:", closed.t[below].mean())
print("mean T above the top:", closed.t[~below].mean())

closed.to_csv("spectrum_rho2.5_G4.csv")
print("wrote spectrum_rho2.5_G4.csv")
