"""Lifetime of the excited emitter with and without the topological mirror.

The emitter population Rabi-oscillates; the lifetime is read off its envelope.
A sharp rise appears once the SSH gap 4 J0 cos(phi) exceeds the Rabi splitting.
"""
import numpy as np

import topopolariton as tp

p = tp.preset("fig3-strong")
h = tp.build_full_heff(p)
t = np.linspace(0, 1.5, 16)
pop = tp.qe_population(h, t)
print("t (1/gamma0)   P_QE")
for ti, x in zip(t, pop):
    print(f"  {ti:5.2f}       {x:.4f}")

tau = tp.qe_lifetime(h)
tau0 = tp.bare_lifetime(p)
print(f"\ntau_TO = {tau.tau:.4f}, tau_0 = {tau0.tau:.4f}, enhancement {tau.tau / tau0.tau:.2f}x")

jc = tp.critical_J0(p)
print(f"\ncritical J0 = {jc / p.Gamma:.2f} Gamma")
J0s = np.array([2, 3, 4, 4.5, 5, 6, 8, 10, 12, 14]) * p.Gamma
sw = tp.lifetime_enhancement_sweep(p, "J0", J0s)
for J0, r in zip(J0s, sw.ratio):
    mark = " <- above gap threshold" if J0 > jc else ""
    print(f"  J0 = {J0 / p.Gamma:5.1f} Gamma  tau_TO/tau_0 = {r:6.2f}{mark}")

# the spacing matters: three-quarter wavelength is optimal
grid = np.linspace(1.3, 1.7, 9) * np.pi
sw = tp.lifetime_enhancement_sweep(p, "varphi", grid)
print("\nvarphi/pi   tau_TO/tau_0")
for v, r in zip(grid, sw.ratio):
    print(f"  {v / np.pi:.3f}     {r:6.2f}")
