"""Robustness of the lifetime enhancement against disorder.

Each realization perturbs atom positions, bonds or frequencies with i.i.d.
uniform draws from a counter-based stream, so results do not depend on worker
count or order.
"""
import numpy as np

import topopolariton as tp

p = tp.preset("fig2")
J0s = np.array([4, 8, 12]) * p.Gamma
clean = tp.lifetime_enhancement_sweep(p, "J0", J0s).ratio
cases = {
    "2% positions": tp.DisorderSpec(position_frac=0.02, seed=1, n_realizations=20),
    "20% couplings": tp.DisorderSpec(coupling_frac=0.2, seed=1, n_realizations=20),
    "frequencies g/sqrt2": tp.DisorderSpec(frequency_halfwidth=p.g / np.sqrt(2), seed=1, n_realizations=20),
}
print("J0/Gamma            " + "  ".join(f"{J / p.Gamma:10.0f}" for J in J0s))
print("clean               " + "  ".join(f"{r:10.2f}" for r in clean))
for name, spec in cases.items():
    res = tp.disorder_sweep(p, spec, "J0", J0s, jobs=2)
    st = res.stats()
    cells = "  ".join(f"{m:5.2f}+-{s:4.2f}" for m, s in zip(st["mean"], st["std"]))
    print(f"{name:20s}{cells}")
