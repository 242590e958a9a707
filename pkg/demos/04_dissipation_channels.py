"""Where do the polaritons lose energy?

The loss form gamma = i(H - H^dagger) is a sum of an emitter term and two
waveguide channels. Its eigenvectors are collective decay channels; projecting
the polaritons onto them splits their loss into cavity-like and radiating parts.
"""
import numpy as np

import topopolariton as tp

p = tp.preset("fig3-strong")
h = tp.build_full_heff(p)
da = tp.dissipation_spectrum(h)
print("largest dissipation eigenvalues chi_m")
for m in range(6):
    print(f"  m={m + 1}  chi = {da.chi[m]:9.4f}  {da.channel_labels[m]}")
print("channels above 1e-10 chi_max:", len(da.significant()))

lossless = tp.dissipation_spectrum(tp.build_full_heff(tp.without_free_space_decay(p)))
print("without free-space decay only", len(lossless.significant()), "channels remain")

print("\npolariton loss budget versus J0 (phi = 0.3 pi)")
for J0 in (4, 6, 8, 10, 12):
    pr = tp.polariton_channel_rates(tp.build_full_heff(p.replace(J0=J0 * p.Gamma)))
    lab = pr.by_label("+")
    parts = "  ".join(f"{k}={v:.3f}" for k, v in sorted(lab.items()))
    print(f"  J0={J0:2d} Gamma total={pr.total['+']:.3f}  {parts}")
