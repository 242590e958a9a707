"""Single-excitation effective Hamiltonians.

Basis order for the full system is ``[QE, CCW, CW, atom_1 ... atom_N]``. The
cavity couples to the mirror only through the waveguide and only in one
direction per mode: CCW light drives the atoms, atoms drive CW.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .params import ConfigError, MirrorRealization, SystemParams, clean_realization

QE, CCW, CW = 0, 1, 2
N_CAVITY = 3


@dataclass(frozen=True)
class EffectiveHamiltonian:
    matrix: np.ndarray
    basis_labels: tuple[str, ...]
    params: SystemParams
    realization: MirrorRealization

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def has_cavity(self) -> bool:
        return self.basis_labels[:1] == ("QE",)

    @property
    def atom_offset(self) -> int:
        """Index of the first atom in the basis."""
        return N_CAVITY if self.has_cavity else 0

    @property
    def n_atoms(self) -> int:
        return self.dim - self.atom_offset

    def hermitian_part(self) -> np.ndarray:
        return 0.5 * (self.matrix + self.matrix.conj().T)

    def dissipation_matrix(self) -> np.ndarray:
        """``i (H - H^dagger)``; the quadratic form of the norm loss rate."""
        return 1j * (self.matrix - self.matrix.conj().T)

    def to_csv(self, path: str | Path) -> None:
        """Dump nonzero entries as ``row, col, re, im`` rows."""
        rows, cols = np.nonzero(self.matrix)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row", "col", "re", "im"])
            for r, c in zip(rows, cols):
                z = self.matrix[r, c]
                w.writerow([r, c, f"{z.real:.17g}", f"{z.imag:.17g}"])


def basis_labels(n_atoms: int, cavity: bool = True) -> tuple[str, ...]:
    atoms = tuple(f"atom{j}" for j in range(1, n_atoms + 1))
    return (("QE", "CCW", "CW") if cavity else ()) + atoms


def _check(params: SystemParams, realization: MirrorRealization | None) -> MirrorRealization:
    if realization is None:
        return clean_realization(params)
    if realization.n_atoms != params.n_atoms:
        raise ConfigError(
            f"realization has {realization.n_atoms} atoms but params.n_atoms = {params.n_atoms}"
        )
    return realization


def _mirror_block(params: SystemParams, real: MirrorRealization) -> np.ndarray:
    ph = real.phases
    block = -1j * params.Gamma * np.exp(1j * np.abs(ph[:, None] - ph[None, :]))
    idx = np.arange(len(ph))
    block[idx, idx] = real.detunings - 1j * (params.Gamma + 0.5 * params.gamma0)
    b = np.arange(len(real.bonds))
    block[b, b + 1] += real.bonds
    block[b + 1, b] += real.bonds
    return block


def build_full_heff(
    params: SystemParams, realization: MirrorRealization | None = None
) -> EffectiveHamiltonian:
    """Dense ``(N+3) x (N+3)`` effective Hamiltonian of cavity QED block plus mirror."""
    real = _check(params, realization)
    n = params.n_atoms
    H = np.zeros((n + N_CAVITY, n + N_CAVITY), dtype=complex)
    H[QE, QE] = -0.5j * params.gamma0
    H[CCW, CCW] = H[CW, CW] = -0.5j * params.kappa
    H[QE, CCW] = H[CCW, QE] = params.g
    H[QE, CW] = H[CW, QE] = params.g
    if n:
        H[N_CAVITY:, N_CAVITY:] = _mirror_block(params, real)
        chiral = -1j * np.sqrt(params.kappa * params.Gamma) * np.exp(1j * real.phases)
        H[N_CAVITY:, CCW] = chiral
        H[CW, N_CAVITY:] = chiral
    return EffectiveHamiltonian(H, basis_labels(n), params, real)


def build_mirror_heff(
    params: SystemParams, realization: MirrorRealization | None = None
) -> EffectiveHamiltonian:
    """``N x N`` Hamiltonian of the bare atom mirror (the atom block of the full one)."""
    if params.n_atoms < 1:
        raise ConfigError("the bare mirror needs at least one atom")
    real = _check(params, realization)
    return EffectiveHamiltonian(
        _mirror_block(params, real), basis_labels(params.n_atoms, cavity=False), params, real
    )


def channel_vectors(h: EffectiveHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    """Right- and left-propagating waveguide coupling vectors ``u_R``, ``u_L``.

    ``i(H - H^dagger) = gamma0 * D + u_R u_R^dagger + u_L u_L^dagger`` with ``D``
    the projector on emitters (QE and atoms).
    """
    p = h.params
    ph = h.realization.phases
    off = h.atom_offset
    uR = np.zeros(h.dim, dtype=complex)
    uL = np.zeros(h.dim, dtype=complex)
    if h.has_cavity:
        uR[CCW] = uL[CW] = np.sqrt(p.kappa)
    uR[off:] = np.sqrt(p.Gamma) * np.exp(1j * ph)
    uL[off:] = np.sqrt(p.Gamma) * np.exp(-1j * ph)
    return uR, uL


def emitter_projector(h: EffectiveHamiltonian) -> np.ndarray:
    d = np.ones(h.dim)
    if h.has_cavity:
        d[CCW] = d[CW] = 0.0
    return np.diag(d)
