"""
Sharp transmission resonances
=============================

Peaks with T >= 0.999 in the low-k region, refined by trisection, with the
full width at T = 0.5.
"""
from svc_tunneling.analysis import find_resonances
from svc_tunneling.geometry import SvcParams

for rho in (2.2, 2.5):
    peaks = find_resonances(SvcParams(rho, 4, 20.0, 15.0), 0.5, 8.0)
    sharp = [r for r in peaks if r.resolved and r.width < 1e-2]
    print(f"rho={rho}: {len(peaks)} peaks, {len(sharp)} with FWHM < 1e-2")
    for r in sharp[:5]:
        print(f"   k* = {r.k_star:.10f}   T = {r.t_peak:.8f}   FWHM = {r.width:.3e}")

# A single barrier (G = 0) resonates where kappa L = m pi
peaks = find_resonances(SvcParams(2.0, 0, 20.0, 15.0), 4.5, 5.0)
print("G=0 peaks:", [round(r.k_star, 6) for r in peaks])
