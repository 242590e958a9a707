"""Reflection, transmission and emitter fluorescence.

A plane wave enters at the cavity junction. Without free-space loss the
scattering is lossless (R + T = 1); the emission spectrum integrates to pi.
"""
import numpy as np

import topopolariton as tp
from topopolariton.response import default_grid, peak_fwhm

for name in ("fig3-weak", "fig3-strong"):
    p = tp.preset(name)
    h = tp.build_full_heff(p)
    d = default_grid(p, n=4001)
    R, T = tp.reflection_transmission(h, d)
    S = tp.emission_spectrum(h, d)
    sol = tp.analyze(h)
    Ep = sol.eigenvalues[sol.polaritons()[0]].real
    loc, width = peak_fwhm(d, S.values, Ep)
    print(f"{name}: Rabi peak at {loc:.2f}, FWHM {width:.3f} gamma0, "
          f"R(peak) = {np.interp(loc, d, R.values):.3f}, T(0) = {np.interp(0, d, T.values):.3f}")

lossless = tp.without_free_space_decay(tp.preset("fig2"))
R, T = tp.reflection_transmission(tp.build_full_heff(lossless), default_grid(lossless))
print("lossless max |R+T-1| =", np.max(np.abs(R.values + T.values - 1)))

print("sum rule int S / pi =", tp.emission_integral(tp.build_full_heff(tp.preset("fig2"))) / np.pi)

# bare atom mirror reflectivity at resonance versus dimerization strength
m = tp.preset("mirror")
print("\nmirror-only R(0) for N=31")
for J0 in (0, 2, 4, 8, 12, 16):
    R, _ = tp.reflection_transmission(tp.build_mirror_heff(m.replace(J0=J0 * m.Gamma)), [0.0])
    print(f"  J0 = {J0:2d} Gamma   R = {R.values[0]:.4f}")
