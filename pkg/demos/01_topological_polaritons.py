"""Topological cavity polaritons.

A quantum emitter sits in a two-mode ring cavity; light leaking from the
cavity meets a dimerized atom chain that acts as a mirror. With the atoms at
three-quarter wavelength spacing the mirror hosts an edge state that binds the
cavity photon, and the two polaritons become narrower than the bare emitter.
"""
import numpy as np

import topopolariton as tp

p = tp.preset("fig2")
print("rates (units of gamma0): g=%g kappa=%g Gamma=%g J0=%g N=%d" % (p.g, p.kappa, p.Gamma, p.J0, p.n_atoms))

for label, q in [("bare cavity", p.replace(n_atoms=0)),
                 ("trivial mirror (J0=0)", p.replace(J0=0.0)),
                 ("topological mirror", p)]:
    sol = tp.analyze(tp.build_full_heff(q))
    plus, minus = sol.polaritons()
    E = sol.eigenvalues[plus]
    print(f"{label:24s} E+ = {E.real:8.3f} {E.imag:+.4f}i   decay = {-2 * E.imag:.4f} gamma0")

# where the upper polariton lives: emitter + cavity, then the first dimer cells
sol = tp.analyze(tp.build_full_heff(p))
n = sol.polaritons()[0]
w = sol.weights[n]
print("\nupper polariton weights")
for lab, x in zip(sol.component_labels[:8], w[:8]):
    print(f"  {lab:8s} {x:.4f}")
print(f"  cells 6+   {w[8:].sum():.2e}")

# the decay keeps falling as the chain grows, then saturates
print("\ndecay of the upper polariton versus N")
for N in (5, 11, 21, 31, 41):
    sol = tp.analyze(tp.build_full_heff(p.replace(n_atoms=N)))
    print(f"  N={N:2d}  {sol.decay_rates[sol.polaritons()[0]]:.4f}")

print("\nbare cavity QED oracle: +-sqrt(2 g^2 - ((kappa-gamma0)/4)^2) =",
      np.sqrt(2 * p.g**2 - ((p.kappa - p.gamma0) / 4) ** 2))
