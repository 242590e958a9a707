"""Frequency-domain observables: driven steady state, R/T spectra, QE emission.

The system is driven by a right-propagating plane wave entering at the cavity
junction. Reflected light leaves to the left through the junction and is
referenced there; transmitted light is referenced just after the last atom.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
import scipy.integrate
import scipy.linalg

from ._parallel import pmap
from .hamiltonian import CCW, CW, QE, EffectiveHamiltonian, build_full_heff, build_mirror_heff
from .params import SystemParams

# s = DRIVE_SIGN * (Delta - H)^-1 P_in; fixed by the single-atom reflection r = -Gamma/(Gamma + gamma0/2 - i Delta)
DRIVE_SIGN = -1j
CHUNK = 512


@dataclass
class SpectrumSeries:
    detunings: np.ndarray
    values: np.ndarray
    observable: str
    amplitude: np.ndarray | None = None
    meta: dict = field(default_factory=dict)


def input_vector(h: EffectiveHamiltonian) -> np.ndarray:
    """Coupling of the incoming right-moving wave (``a_in = 1``) to each mode."""
    p = h.params
    P = np.zeros(h.dim, dtype=complex)
    if h.has_cavity:
        P[CCW] = np.sqrt(p.kappa)
    P[h.atom_offset:] = np.sqrt(p.Gamma) * np.exp(1j * h.realization.phases)
    return P


def _last_phase(h: EffectiveHamiltonian) -> float:
    ph = h.realization.phases
    return float(ph[-1]) if len(ph) else 0.0


def output_vectors(h: EffectiveHamiltonian) -> tuple[np.ndarray, np.ndarray, complex]:
    """``(r_vec, t_vec, passthrough)`` with ``a_out = r_vec.s`` and ``b_out = passthrough + t_vec.s``.

    Each atom's left-going emission picks up ``exp(i phi_j)`` on its way back to
    the junction; right-going emission picks up ``exp(i (phi_N - phi_j))`` to the
    last atom.
    """
    p = h.params
    ph = h.realization.phases
    phN = _last_phase(h)
    off = h.atom_offset
    r_vec = np.zeros(h.dim, dtype=complex)
    t_vec = np.zeros(h.dim, dtype=complex)
    if h.has_cavity:
        r_vec[CW] = np.sqrt(p.kappa)
        t_vec[CCW] = np.sqrt(p.kappa) * np.exp(1j * phN)
    r_vec[off:] = np.sqrt(p.Gamma) * np.exp(1j * ph)
    t_vec[off:] = np.sqrt(p.Gamma) * np.exp(1j * (phN - ph))
    return r_vec, t_vec, np.exp(1j * phN)


def _solve_many(H: np.ndarray, omegas: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """``(omega I - H)^-1 rhs`` for every omega, shape ``(n_omega, dim)``."""
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    dim = H.shape[0]
    eye = np.eye(dim)
    out = np.empty((len(omegas), dim), dtype=complex)
    for start in range(0, len(omegas), CHUNK):
        w = omegas[start:start + CHUNK]
        A = w[:, None, None] * eye - H
        b = np.broadcast_to(rhs, (len(w), dim))[..., None]
        out[start:start + CHUNK] = np.linalg.solve(A, b)[..., 0]
    return out


def steady_state(h: EffectiveHamiltonian, delta) -> np.ndarray:
    """Driven steady-state amplitudes ``s(Delta)`` for unit input amplitude."""
    s = DRIVE_SIGN * _solve_many(h.matrix, delta, input_vector(h))
    return s[0] if np.ndim(delta) == 0 else s


def reflection_transmission(h: EffectiveHamiltonian, deltas) -> tuple[SpectrumSeries, SpectrumSeries]:
    deltas = np.asarray(deltas, dtype=float)
    s = steady_state(h, np.atleast_1d(deltas))
    r_vec, t_vec, through = output_vectors(h)
    r = s @ r_vec
    t = through + s @ t_vec
    meta = {"drive": "left"}
    return (
        SpectrumSeries(deltas, np.abs(r) ** 2, "R", r, dict(meta)),
        SpectrumSeries(deltas, np.abs(t) ** 2, "T", t, dict(meta)),
    )


def _qe_index(h: EffectiveHamiltonian) -> int:
    if not h.has_cavity:
        raise ValueError("emission spectrum needs the QE in the basis")
    return QE


def emission_spectrum(h: EffectiveHamiltonian, omegas) -> SpectrumSeries:
    """``S(omega) = Re{ i [(omega - H)^-1]_{QE,QE} }`` for an initially excited QE."""
    omegas = np.asarray(omegas, dtype=float)
    q = _qe_index(h)
    c0 = np.zeros(h.dim, dtype=complex)
    c0[q] = 1.0
    G = _solve_many(h.matrix, np.atleast_1d(omegas), c0)[:, q]
    return SpectrumSeries(omegas, (1j * G).real, "S", 1j * G)


def emission_spectrum_eigen(h: EffectiveHamiltonian, omegas) -> np.ndarray:
    """Same as :func:`emission_spectrum` through the eigen-resolvent (cross-check)."""
    q = _qe_index(h)
    E, V = scipy.linalg.eig(h.matrix)
    left = np.linalg.solve(V, np.eye(h.dim)[:, q])
    weights = V[q] * left
    G = (weights[None, :] / (np.asarray(omegas)[:, None] - E[None, :])).sum(axis=1)
    return (1j * G).real


def reflection_transmission_eigen(h: EffectiveHamiltonian, deltas) -> tuple[np.ndarray, np.ndarray]:
    """R and T through the eigen-resolvent (cross-check of the direct solves)."""
    E, V = scipy.linalg.eig(h.matrix)
    Vinv_P = np.linalg.solve(V, input_vector(h))
    r_vec, t_vec, through = output_vectors(h)
    denom = np.asarray(deltas)[:, None] - E[None, :]
    s = DRIVE_SIGN * (Vinv_P[None, :] / denom) @ V.T
    return np.abs(s @ r_vec) ** 2, np.abs(through + s @ t_vec) ** 2


def emission_integral(h: EffectiveHamiltonian) -> float:
    """``int S(omega) d omega`` over the whole real line by adaptive quadrature."""
    q = _qe_index(h)
    H = h.matrix
    eye = np.eye(h.dim)
    c0 = eye[:, q]

    def S(w):
        return (1j * np.linalg.solve(w * eye - H, c0)[q]).real

    poles = np.sort(scipy.linalg.eigvals(H).real)
    widths = np.abs(scipy.linalg.eigvals(H).imag)
    pad = 10 * max(widths.max(), 1e-12)
    knots = np.unique(np.concatenate([[poles[0] - pad], poles, [poles[-1] + pad]]))
    total = 0.0
    opts = dict(limit=400, epsabs=1e-12, epsrel=1e-11)
    total += scipy.integrate.quad(S, -np.inf, knots[0], **opts)[0]
    for a, b in zip(knots[:-1], knots[1:]):
        if b > a:
            total += scipy.integrate.quad(S, a, b, **opts)[0]
    total += scipy.integrate.quad(S, knots[-1], np.inf, **opts)[0]
    return total


def peak_fwhm(x, y, near: float) -> tuple[float, float]:
    """Location and full width at half maximum of the sampled peak closest to ``near``."""
    x = np.asarray(x)
    y = np.asarray(y)
    peaks = np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])) + 1
    if not len(peaks):
        raise ValueError("no peak in the sampled curve")
    k = peaks[np.argmin(np.abs(x[peaks] - near))]
    half = 0.5 * y[k]
    i = k
    while i > 0 and y[i] > half:
        i -= 1
    j = k
    while j < len(y) - 1 and y[j] > half:
        j += 1
    if y[i] > half or y[j] > half:
        raise ValueError("half maximum not reached inside the grid")
    left = np.interp(half, [y[i], y[i + 1]], [x[i], x[i + 1]])
    right = np.interp(half, [y[j], y[j - 1]], [x[j], x[j - 1]])
    return float(x[k]), float(right - left)


def default_grid(params: SystemParams, n: int = 2001, mirror_only: bool = False) -> np.ndarray:
    """Polariton window ``+-2.5 sqrt(2) g``, or ``+-4 Gamma`` for the bare mirror."""
    if mirror_only or params.g == 0:
        half = 4.0 * params.Gamma
    else:
        half = 2.5 * np.sqrt(2.0) * params.g
    return np.linspace(-half, half, n)


@dataclass
class ResponseSweep:
    axis: str
    values: np.ndarray
    detunings: np.ndarray
    data: np.ndarray  # shape (len(values), len(detunings))
    observable: str


def _sweep_point(params: SystemParams, axis: str, observable: str, deltas, mirror_only, value):
    p = params.replace(**{axis: float(value)})
    h = build_mirror_heff(p) if mirror_only else build_full_heff(p)
    if observable == "S":
        return emission_spectrum(h, deltas).values
    R, T = reflection_transmission(h, deltas)
    return R.values if observable == "R" else T.values


def response_sweep(
    params: SystemParams,
    axis: str,
    values,
    observable: str = "R",
    deltas=None,
    mirror_only: bool = False,
    jobs: int = 1,
) -> ResponseSweep:
    """Heatmap of R, T or S versus detuning while sweeping ``phi_dim`` or ``J0``."""
    if axis not in ("phi_dim", "J0"):
        raise ValueError(f"unknown sweep axis {axis!r}")
    if observable not in ("R", "T", "S"):
        raise ValueError(f"unknown observable {observable!r}")
    if deltas is None:
        deltas = default_grid(params, mirror_only=mirror_only)
    deltas = np.asarray(deltas, dtype=float)
    values = np.asarray(values, dtype=float)
    fn = functools.partial(_sweep_point, params, axis, observable, deltas, mirror_only)
    rows = pmap(fn, values, jobs)
    return ResponseSweep(axis, values, deltas, np.array(rows), observable)
