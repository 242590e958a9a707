"""Disorder ensembles of the lifetime enhancement."""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass

import numpy as np

from ._parallel import pmap
from .dynamics import bare_lifetime, qe_lifetime
from .hamiltonian import build_full_heff
from .params import ConfigError, DisorderSpec, SystemParams, sample_realization

log = logging.getLogger(__name__)


@dataclass
class EnsembleResult:
    axis: str
    values: np.ndarray
    ratios: np.ndarray  # (n_points, n_realizations); NaN where the realization failed
    censored: np.ndarray  # (n_points, n_realizations) lower-bound lifetimes
    tau0: float
    spec: DisorderSpec

    @property
    def n_realizations(self) -> int:
        return self.ratios.shape[1]

    @property
    def failures(self) -> np.ndarray:
        return np.isnan(self.ratios).sum(axis=1)

    @property
    def censored_count(self) -> np.ndarray:
        return self.censored.sum(axis=1)

    def table(self):
        """Rows ``value, mean, std, min, max`` (all) then the same without censored, then counts."""
        a, b = self.stats(True), self.stats(False)
        keys = ("mean", "std", "min", "max")
        for i, v in enumerate(self.values):
            yield [v, *(a[k][i] for k in keys), *(b[k][i] for k in keys),
                   self.censored_count[i], self.failures[i]]

    TABLE_HEADER = ("mean", "std", "min", "max", "mean_uncensored", "std_uncensored",
                    "min_uncensored", "max_uncensored", "censored", "failed")

    def stats(self, include_censored: bool = True) -> dict[str, np.ndarray]:
        """Per-point mean, std, min, max over successful realizations."""
        keys = ("mean", "std", "min", "max")
        out = {k: np.full(len(self.values), np.nan) for k in keys}
        for i, row in enumerate(self.ratios):
            ok = ~np.isnan(row)
            if not include_censored:
                ok &= ~self.censored[i]
            x = row[ok]
            if not len(x):
                continue
            out["mean"][i] = x.mean()
            out["min"][i] = x.min()
            out["max"][i] = x.max()
            # identical samples give exactly zero spread
            out["std"][i] = 0.0 if x.min() == x.max() else x.std()
            out["mean"][i] = min(max(out["mean"][i], out["min"][i]), out["max"][i])
        return out


def _one(params: SystemParams, spec: DisorderSpec, task: tuple[dict, int]):
    changes, index = task
    p = params.replace(**changes)
    try:
        real = sample_realization(p, spec, index)
        res = qe_lifetime(build_full_heff(p, real))
    except (np.linalg.LinAlgError, RuntimeError, ValueError) as exc:
        log.warning("realization %d at %s failed: %s", index, changes, exc)
        return np.nan, False
    return res.tau, res.lower_bound


def disorder_sweep(
    params: SystemParams,
    spec: DisorderSpec,
    axis: str,
    values,
    jobs: int = 1,
    allow_combined: bool = False,
) -> EnsembleResult:
    """``tau_TO/tau_0`` statistics over ``spec.n_realizations`` disordered mirrors.

    ``axis`` is ``"J0"`` (absolute rates) or ``"d"`` (spacing in units of the
    resonant wavelength, i.e. ``varphi = 2 pi d``). Realizations and grid points
    form one flat work list; results are reduced in index order.
    """
    if len(spec.kinds) > 1 and not allow_combined:
        raise ConfigError(f"combined disorder {spec.kinds} needs allow_combined=True")
    values = np.asarray(values, dtype=float)
    if axis == "J0":
        changes = [{"J0": float(v)} for v in values]
    elif axis == "d":
        changes = [{"varphi": float(2.0 * np.pi * v)} for v in values]
    else:
        raise ValueError(f"unknown disorder sweep axis {axis!r}")
    tau0 = bare_lifetime(params).tau
    tasks = [(c, k) for c in changes for k in range(spec.n_realizations)]
    res = pmap(functools.partial(_one, params, spec), tasks, jobs)
    shape = (len(values), spec.n_realizations)
    tau = np.array([r[0] for r in res], dtype=float).reshape(shape)
    censored = np.array([r[1] for r in res], dtype=bool).reshape(shape)
    return EnsembleResult(axis, values, tau / tau0, censored, tau0, spec)
