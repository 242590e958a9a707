"""Time evolution of single-excitation amplitudes and polariton lifetimes."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.integrate import solve_ivp

from ._parallel import pmap
from .hamiltonian import QE, EffectiveHamiltonian, build_full_heff
from .params import SystemParams

DEFECTIVE_COND = 1e8
DEFAULT_POINTS = 4001
DEFAULT_SPAN = 1.5  # in units of 1/gamma0 (or 1/Gamma)
MAX_EXTENSIONS = 4


class IntegrationError(RuntimeError):
    pass


@dataclass
class TimeSeries:
    times: np.ndarray
    amplitudes: np.ndarray  # shape (n_times, dim)
    labels: tuple[str, ...]
    method: str

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def population(self, label: str = "QE") -> np.ndarray:
        return self.populations[:, self.labels.index(label)]

    @property
    def total(self) -> np.ndarray:
        return self.populations.sum(axis=1)


def _eigen_route(H, s0, times):
    E, V = scipy.linalg.eig(H)
    cond = np.linalg.cond(V)
    coeff = np.linalg.solve(V, s0)
    phases = np.exp(-1j * np.outer(times, E))
    return (phases * coeff) @ V.T, cond


def _ode_route(H, s0, times):
    sol = solve_ivp(
        lambda t, y: -1j * (H @ y),
        (float(times[0]), float(times[-1])),
        s0.astype(complex),
        method="DOP853",
        t_eval=times,
        rtol=1e-11,
        atol=1e-13,
    )
    if not sol.success or not np.all(np.isfinite(sol.y)):
        raise IntegrationError(sol.message)
    return sol.y.T


def propagate(h: EffectiveHamiltonian, initial, times, method: str = "auto") -> TimeSeries:
    """``s(t) = exp(-i H t) s(0)`` on a monotone time grid starting at ``times[0]``.

    ``method`` is ``"eigen"`` (eigenbasis), ``"ode"`` (adaptive DOP853) or
    ``"auto"``: eigenbasis unless the eigenvectors are near-defective.
    """
    H = h.matrix if isinstance(h, EffectiveHamiltonian) else np.asarray(h, dtype=complex)
    labels = h.basis_labels if isinstance(h, EffectiveHamiltonian) else tuple(map(str, range(len(H))))
    s0 = np.asarray(initial, dtype=complex)
    if np.linalg.norm(s0) > 1 + 1e-12:
        raise ValueError("initial state norm exceeds 1")
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("time grid must be monotone")
    t_rel = times - times[0]
    if method in ("auto", "eigen"):
        amps, cond = _eigen_route(H, s0, t_rel)
        if method == "eigen" or cond <= DEFECTIVE_COND:
            return TimeSeries(times, amps, labels, "eigen")
    elif method != "ode":
        raise ValueError(f"unknown method {method!r}")
    return TimeSeries(times, _ode_route(H, s0, times), labels, "ode")


def excite(h: EffectiveHamiltonian, label: str = "QE") -> np.ndarray:
    s0 = np.zeros(h.dim, dtype=complex)
    s0[h.basis_labels.index(label)] = 1.0
    return s0


@dataclass
class Lifetime:
    tau: float
    n_maxima: int  # envelope nodes (t=0 counted) above 1/e before the crossing
    lower_bound: bool  # no crossing inside the grid; tau is the grid end

    def __float__(self):
        return float(self.tau)


def local_maxima(pop: np.ndarray) -> np.ndarray:
    """Interior indices where the sampled curve has a strict local peak."""
    p = np.asarray(pop)
    inner = (p[1:-1] > p[:-2]) & (p[1:-1] >= p[2:])
    return np.flatnonzero(inner) + 1


def lifetime(times, pop) -> Lifetime:
    """Time for the population envelope to fall from its start to ``1/e``.

    The envelope joins ``t = 0`` and successive local maxima, interpolated
    linearly in ``log``. Curves without interior maxima use the direct crossing.
    """
    t = np.asarray(times, dtype=float)
    p = np.asarray(pop, dtype=float)
    thr = np.exp(-1.0) * p[0]
    peaks = local_maxima(p)
    if len(peaks) == 0:
        below = np.flatnonzero(p < thr)
        if not len(below):
            return Lifetime(float(t[-1]), 1, True)
        k = below[0]
        tau = np.interp(thr, [p[k], p[k - 1]], [t[k], t[k - 1]])
        return Lifetime(float(tau), 1, False)
    nodes_t = np.concatenate([[t[0]], t[peaks]])
    nodes_p = np.concatenate([[p[0]], p[peaks]])
    below = np.flatnonzero(nodes_p < thr)
    if not len(below):
        # the tail after the last peak may still decay monotonically past 1/e
        tail = np.flatnonzero(p[peaks[-1]:] < thr)
        if len(tail) and np.all(np.diff(p[peaks[-1]:]) <= 0):
            k = peaks[-1] + tail[0]
            tau = np.interp(thr, [p[k], p[k - 1]], [t[k], t[k - 1]])
            return Lifetime(float(tau), len(nodes_t), False)
        return Lifetime(float(t[-1]), len(nodes_t), True)
    k = below[0]
    l0, l1 = np.log(nodes_p[k - 1]), np.log(max(nodes_p[k], 1e-300))
    frac = (np.log(thr) - l0) / (l1 - l0)
    tau = nodes_t[k - 1] + frac * (nodes_t[k] - nodes_t[k - 1])
    return Lifetime(float(tau), int(k), False)


def qe_population(h: EffectiveHamiltonian, times) -> np.ndarray:
    """QE population after exciting the QE; eigenbasis route with ODE fallback."""
    H = h.matrix
    E, V = scipy.linalg.eig(H)
    if np.linalg.cond(V) > DEFECTIVE_COND:
        return propagate(h, excite(h), times, method="ode").population("QE")
    coeff = np.linalg.solve(V, excite(h))
    amp = np.exp(-1j * np.outer(np.asarray(times) - times[0], E)) @ (V[QE] * coeff)
    return np.abs(amp) ** 2


def qe_lifetime(
    h: EffectiveHamiltonian,
    t_end: float | None = None,
    n_points: int = DEFAULT_POINTS,
    max_extensions: int = MAX_EXTENSIONS,
) -> Lifetime:
    """QE-envelope lifetime, extending the grid x4 (same step) until it crosses 1/e."""
    if t_end is None:
        t_end = DEFAULT_SPAN / h.params.time_unit_rate
    for _ in range(max_extensions + 1):
        times = np.linspace(0.0, t_end, n_points)
        res = lifetime(times, qe_population(h, times))
        if not res.lower_bound:
            return res
        t_end *= 4
        n_points = 4 * (n_points - 1) + 1
    return res


def bare_lifetime(params: SystemParams, **kw) -> Lifetime:
    """Lifetime of the cavity QED block without any mirror (``tau_0``)."""
    return qe_lifetime(build_full_heff(params.replace(n_atoms=0)), **kw)


@dataclass
class LifetimeSweep:
    axis: str
    values: np.ndarray | tuple[np.ndarray, np.ndarray]
    tau: np.ndarray
    ratio: np.ndarray
    lower_bound: np.ndarray
    n_maxima: np.ndarray
    tau0: float


def _point(params: SystemParams, changes: dict) -> Lifetime:
    return qe_lifetime(build_full_heff(params.replace(**changes)))


_AXES = {"varphi": "varphi", "J0": "J0", "N": "n_atoms"}


def lifetime_enhancement_sweep(
    params: SystemParams, axis: str, values, values2=None, jobs: int = 1
) -> LifetimeSweep:
    """``tau_TO / tau_0`` along ``varphi``, ``J0`` or ``N``, or on a ``(J0, N)`` grid.

    For ``axis="J0,N"`` pass the ``J0`` grid as ``values`` and the ``N`` grid as
    ``values2``; results come back with shape ``(len(J0), len(N))``.
    """
    tau0 = bare_lifetime(params).tau
    if axis == "J0,N":
        J0s = np.asarray(values, dtype=float)
        Ns = np.asarray(values2, dtype=int)
        changes = [{"J0": float(a), "n_atoms": int(b)} for a in J0s for b in Ns]
        shape = (len(J0s), len(Ns))
        vals = (J0s, Ns)
    elif axis in _AXES:
        key = _AXES[axis]
        vals = np.asarray(values, dtype=int if key == "n_atoms" else float)
        changes = [{key: (int(v) if key == "n_atoms" else float(v))} for v in vals]
        shape = (len(vals),)
    else:
        raise ValueError(f"unknown sweep axis {axis!r}")
    res = pmap(functools.partial(_point, params), changes, jobs)
    tau = np.array([r.tau for r in res]).reshape(shape)
    return LifetimeSweep(
        axis,
        vals,
        tau,
        tau / tau0,
        np.array([r.lower_bound for r in res]).reshape(shape),
        np.array([r.n_maxima for r in res]).reshape(shape),
        tau0,
    )
