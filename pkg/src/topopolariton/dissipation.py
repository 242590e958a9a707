"""Dissipation channels: spectrum of ``gamma = i(H - H^dagger)`` and polariton loss budgets.

``d||s||^2/dt = -<s|gamma|s>``, so ``gamma`` is the loss quadratic form. Rates
quoted with the factor-1/2 convention (``gamma/2``) are available through
``half_scale``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hamiltonian import CCW, CW, EffectiveHamiltonian
from .spectral import EigenSolution, analyze

CAVITY_LIKE = "CavityLike"
EVEN = "EvenPolarized"
ODD = "OddPolarized"
BACKGROUND = "Background"


@dataclass
class DissipationAnalysis:
    gamma_matrix: np.ndarray
    chi: np.ndarray  # descending
    channel_vectors: np.ndarray  # columns, orthonormal
    channel_labels: list[str]

    @property
    def half_scale(self) -> np.ndarray:
        return 0.5 * self.chi

    def significant(self, rel: float = 1e-10) -> np.ndarray:
        return np.flatnonzero(self.chi > rel * self.chi[0]) if len(self.chi) else np.zeros(0, int)


def _label(v: np.ndarray, h: EffectiveHamiltonian) -> str:
    prob = np.abs(v) ** 2
    if h.has_cavity and prob[CCW] + prob[CW] > 0.5:
        return CAVITY_LIKE
    atoms = prob[h.atom_offset:]
    total = atoms.sum()
    if total <= 0:
        return BACKGROUND
    odd = atoms[0::2].sum() / total  # atoms 1, 3, 5, ...
    if odd > 0.6:
        return ODD
    if odd < 0.4:
        return EVEN
    return BACKGROUND


def dissipation_spectrum(h: EffectiveHamiltonian) -> DissipationAnalysis:
    gamma = h.dissipation_matrix()
    gamma = 0.5 * (gamma + gamma.conj().T)
    chi, vecs = scipy.linalg.eigh(gamma)
    order = np.argsort(-chi, kind="stable")
    chi, vecs = chi[order], vecs[:, order]
    labels = [_label(vecs[:, m], h) for m in range(len(chi))]
    return DissipationAnalysis(h.dissipation_matrix(), chi, vecs, labels)


@dataclass
class PolaritonRates:
    """Loss of the two Hermitian-part polaritons, split over dissipation channels."""

    per_channel: dict[str, np.ndarray]  # "+" / "-" -> rates Gamma^m, aligned with chi
    total: dict[str, float]  # sum over channels
    quadratic: dict[str, float]  # <psi|gamma|psi>
    states: dict[str, np.ndarray]
    energies: dict[str, float]
    overlap: dict[str, float]  # |<psi_herm|psi_eff>| with the matching H_eff eigenstate
    ambiguous: bool
    analysis: DissipationAnalysis

    def by_label(self, sign: str) -> dict[str, float]:
        out: dict[str, float] = {}
        for lab, rate in zip(self.analysis.channel_labels, self.per_channel[sign]):
            out[lab] = out.get(lab, 0.0) + float(rate)
        return out


def polariton_channel_rates(
    h: EffectiveHamiltonian,
    sol: EigenSolution | None = None,
    analysis: DissipationAnalysis | None = None,
) -> PolaritonRates:
    """``Gamma_pm^m = chi_m |<psi_pm|v_m>|^2`` for the polaritons of the Hermitian part.

    The Hermitian-part eigenstates matched to the classified Polariton+/- of
    ``H_eff`` (largest overlap) play the role of ``psi_pm``.
    """
    if sol is None:
        sol = analyze(h)
    if analysis is None:
        analysis = dissipation_spectrum(h)
    plus, minus = sol.polaritons()
    if plus is None or minus is None:
        raise ValueError("no polariton pair found in the eigen solution")
    herm_E, herm_V = scipy.linalg.eigh(h.hermitian_part())
    per, tot, quad, states, energies, overlap = {}, {}, {}, {}, {}, {}
    for sign, n in (("+", plus), ("-", minus)):
        target = sol.right_vectors[:, n]
        ov = np.abs(herm_V.conj().T @ target)
        k = int(np.argmax(ov))
        psi = herm_V[:, k]
        proj = analysis.channel_vectors.conj().T @ psi
        rates = analysis.chi * np.abs(proj) ** 2
        per[sign] = rates
        tot[sign] = float(rates.sum())
        quad[sign] = float((psi.conj() @ analysis.gamma_matrix @ psi).real)
        states[sign] = psi
        energies[sign] = float(herm_E[k])
        overlap[sign] = float(ov[k])
    return PolaritonRates(per, tot, quad, states, energies, overlap, sol.ambiguous, analysis)
