"""Eigenanalysis of effective Hamiltonians: decay rates, weights, state classes."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .hamiltonian import EffectiveHamiltonian, build_mirror_heff
from .params import ConfigError, SystemParams

POLARITON_PLUS = "Polariton+"
POLARITON_MINUS = "Polariton-"
EDGE = "Edge"
BULK = "Bulk"
CAVITY_LIKE = "CavityLike"

DEFECTIVE_COND = 1e8
EDGE_CELLS = 3


class NearDefectiveWarning(RuntimeWarning):
    """Eigenvector matrix close to singular (near an exceptional point)."""


@dataclass
class EigenSolution:
    """Eigenpairs sorted by ascending decay rate ``-Im E``.

    ``weights[n, k]`` is the probability of state ``n`` on component
    ``component_labels[k]`` (QE, CCW, CW, then dimer cells).
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    weights: np.ndarray
    component_labels: tuple[str, ...]
    condition: float
    has_cavity: bool
    classes: list[str] | None = None
    ambiguous: bool = False
    edge_side: dict[int, str] = field(default_factory=dict)

    @property
    def decay_rates(self) -> np.ndarray:
        return -2.0 * self.eigenvalues.imag

    @property
    def cavity_weight(self) -> np.ndarray:
        """Weight on QE + CCW + CW (zero for a bare mirror)."""
        if not self.has_cavity:
            return np.zeros(len(self.eigenvalues))
        return self.weights[:, :3].sum(axis=1)

    @property
    def mirror_weight(self) -> np.ndarray:
        return 1.0 - self.cavity_weight

    def index_of(self, cls: str) -> int | None:
        if self.classes is None:
            raise ValueError("solution has not been classified")
        hits = [i for i, c in enumerate(self.classes) if c == cls]
        return hits[0] if hits else None

    def polaritons(self) -> tuple[int | None, int | None]:
        return self.index_of(POLARITON_PLUS), self.index_of(POLARITON_MINUS)

    def rows(self):
        """One record per eigenstate for CSV output."""
        for n, E in enumerate(self.eigenvalues):
            row = {
                "index": n,
                "re": E.real,
                "im": E.imag,
                "decay": -2.0 * E.imag,
                "class": self.classes[n] if self.classes else "",
                "cavity_weight": self.cavity_weight[n],
            }
            row.update({f"w_{lab}": self.weights[n, k] for k, lab in enumerate(self.component_labels)})
            yield row


def cell_labels(n_atoms: int) -> tuple[str, ...]:
    return tuple(f"cell{k}" for k in range(1, (n_atoms + 1) // 2 + 1))


def component_weights(vectors: np.ndarray, n_atoms: int, cavity: bool) -> np.ndarray:
    """Aggregate ``|psi|^2`` into QE, CCW, CW and dimer cells (atoms 2k-1, 2k)."""
    prob = np.abs(vectors.T) ** 2
    off = 3 if cavity else 0
    atoms = prob[:, off:]
    n_cells = (n_atoms + 1) // 2
    padded = np.zeros((prob.shape[0], 2 * n_cells))
    padded[:, :n_atoms] = atoms
    cells = padded.reshape(prob.shape[0], n_cells, 2).sum(axis=2)
    return np.hstack([prob[:, :off], cells])


def eigendecompose(h: EffectiveHamiltonian | np.ndarray) -> EigenSolution:
    """Diagonalize and sort by decay rate; columns of ``V`` have unit norm."""
    if isinstance(h, EffectiveHamiltonian):
        H, n_atoms, cavity = h.matrix, h.n_atoms, h.has_cavity
    else:
        H = np.asarray(h, dtype=complex)
        n_atoms, cavity = H.shape[0], False
    if not np.all(np.isfinite(H)):
        raise ValueError("Hamiltonian contains non-finite entries")
    try:
        E, V = scipy.linalg.eig(H)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"eigensolver did not converge: {exc}") from exc
    order = np.lexsort((E.real, -E.imag))
    E, V = E[order], V[:, order]
    V = V / np.linalg.norm(V, axis=0)
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond > DEFECTIVE_COND:
        warnings.warn(f"eigenvector condition number {cond:.3g}", NearDefectiveWarning, stacklevel=2)
    labels = (("QE", "CCW", "CW") if cavity else ()) + cell_labels(n_atoms)
    return EigenSolution(E, V, component_weights(V, n_atoms, cavity), labels, cond, cavity)


def boundary_localization(sol: EigenSolution, n: int) -> tuple[float, str]:
    """Fraction of the mirror weight of state ``n`` in the outermost cells, and which side."""
    off = 3 if sol.has_cavity else 0
    cells = sol.weights[n, off:]
    total = cells.sum()
    if total <= 0:
        return 0.0, "left"
    left = cells[:EDGE_CELLS].sum() / total
    right = cells[-EDGE_CELLS:].sum() / total
    return (left, "left") if left >= right else (right, "right")


def classify(sol: EigenSolution, params: SystemParams | None = None) -> list[str]:
    """Label every eigenstate as polariton, edge, bulk or cavity-like.

    Polariton+/- are the states of largest cavity-QED weight with positive /
    negative real energy (states at zero energy excluded). The edge state is the
    mirror-dominated state nearest zero energy whose weight sits mostly in the
    three outermost cells. Marks ``sol.ambiguous`` when the runner-up polariton
    candidate is within 10% of the winner.
    """
    E = sol.eigenvalues
    n_states = len(E)
    classes = [None] * n_states
    wc, wm = sol.cavity_weight, sol.mirror_weight
    scale = max(float(np.max(np.abs(E))), 1e-300)
    tol = 1e-9 * scale
    sol.ambiguous = False

    if sol.has_cavity:
        for label, side in ((POLARITON_PLUS, E.real > tol), (POLARITON_MINUS, E.real < -tol)):
            cand = np.flatnonzero(side)
            if not len(cand):
                continue
            ranked = cand[np.argsort(-wc[cand], kind="stable")]
            classes[ranked[0]] = label
            if len(ranked) > 1 and wc[ranked[1]] > 0.9 * wc[ranked[0]]:
                sol.ambiguous = True

    sol.edge_side = {}
    edge_cand = []
    for n in range(n_states):
        if classes[n] is None and wm[n] > 0.5:
            ratio, side = boundary_localization(sol, n)
            if ratio > 0.5:
                edge_cand.append((abs(E[n].real), n, side))
    if edge_cand:
        _, n_edge, side = min(edge_cand)
        classes[n_edge] = EDGE
        sol.edge_side[n_edge] = side

    for n in range(n_states):
        if classes[n] is None:
            classes[n] = BULK if wm[n] > 0.5 else CAVITY_LIKE
    sol.classes = classes
    return classes


def analyze(h: EffectiveHamiltonian) -> EigenSolution:
    """Eigendecompose and classify in one go."""
    sol = eigendecompose(h)
    classify(sol, h.params)
    return sol


@dataclass
class EdgeScan:
    J0: np.ndarray
    decay: np.ndarray
    energy: np.ndarray
    localized: np.ndarray
    varphi: float


def edge_decay_scan(params: SystemParams, J0_grid, varphi: float | None = None) -> EdgeScan:
    """Decay rate ``-2 Im E`` of the bare-mirror edge state versus ``J0``.

    Needs odd ``N`` (a single edge state) and ``gamma0 = 0``. When no state passes
    the localization test (small ``J0``, tiny gap) the zero-energy mirror state
    is used and ``localized`` is False at that point.
    """
    if params.n_atoms % 2 != 1:
        raise ConfigError("edge_decay_scan needs an odd number of atoms")
    if params.gamma0 != 0:
        raise ConfigError("edge_decay_scan needs gamma0 = 0")
    if varphi is not None:
        params = params.replace(varphi=varphi)
    J0_grid = np.asarray(J0_grid, dtype=float)
    decay = np.empty(len(J0_grid))
    energy = np.empty(len(J0_grid), dtype=complex)
    localized = np.zeros(len(J0_grid), dtype=bool)
    for i, J0 in enumerate(J0_grid):
        sol = analyze(build_mirror_heff(params.replace(J0=J0)))
        n = sol.index_of(EDGE)
        if n is None:
            n = int(np.argmin(np.abs(sol.eigenvalues.real)))
        else:
            localized[i] = True
        energy[i] = sol.eigenvalues[n]
        decay[i] = -2.0 * sol.eigenvalues[n].imag
    return EdgeScan(J0_grid, decay, energy, localized, params.varphi)


def band_sweep_vs_spacing(params: SystemParams, d_over_lambda) -> np.ndarray:
    """Sorted real energies of the bare mirror for each spacing ``d / lambda0``.

    Returns an array of shape ``(len(d_over_lambda), N)``.
    """
    d = np.asarray(d_over_lambda, dtype=float)
    out = np.empty((len(d), params.n_atoms))
    for i, x in enumerate(d):
        h = build_mirror_heff(params.replace(varphi=2.0 * np.pi * x))
        out[i] = np.sort(scipy.linalg.eigvals(h.matrix).real)
    return out
