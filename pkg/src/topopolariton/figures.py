"""Preset pipelines that regenerate the data behind every figure panel.

Each pipeline writes CSV files into its own directory and returns the written
paths together with a small JSON-friendly summary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import io
from .dissipation import dissipation_spectrum, polariton_channel_rates
from .dynamics import bare_lifetime, excite, lifetime_enhancement_sweep, propagate, qe_lifetime
from .ensemble import disorder_sweep
from .hamiltonian import build_full_heff, build_mirror_heff
from .params import DisorderSpec, SystemParams, critical_J0, preset, without_free_space_decay
from .response import default_grid, emission_spectrum, reflection_transmission, response_sweep
from .spectral import EDGE, analyze, band_sweep_vs_spacing, edge_decay_scan

PI = np.pi


@dataclass
class Context:
    out_dir: Path
    jobs: int = 1
    seed: int = 2024
    n_realizations: int = 100
    written: list[Path] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def csv(self, name: str, header, rows) -> Path:
        p = io.write_csv(self.out_dir / name, header, rows)
        self.written.append(p)
        return p


def _eigen_rows(sol, tag=""):
    for r in sol.rows():
        yield [tag, r["index"], r["re"], r["im"], r["decay"], r["class"], r["cavity_weight"]]


EIGEN_HEADER = ["system", "index", "re", "im", "decay", "class", "cavity_weight"]


def polariton_decay(params: SystemParams) -> tuple[complex, complex]:
    sol = analyze(build_full_heff(params))
    plus, minus = sol.polaritons()
    return sol.eigenvalues[plus], sol.eigenvalues[minus]


# --- fig1-inset ---------------------------------------------------------------

def fig1_inset(ctx: Context):
    d = np.linspace(0.0, 1.0, 201)
    rows = []
    for J0 in (0.0, 40.0):
        p = preset("mirror", n_atoms=9, J0=J0)
        bands = band_sweep_vs_spacing(p, d)
        rows += [[J0 / p.Gamma, x, n, e] for x, row in zip(d, bands) for n, e in enumerate(row)]
    ctx.csv("bands.csv", ["J0_over_Gamma", "d_over_lambda", "band", "re"], rows)


# --- fig2 panels -------------------------------------------------------------

def fig2(ctx: Context):
    p = preset("fig2")
    sol = analyze(build_full_heff(p))
    ctx.csv(
        "probability.csv",
        ["index", "re", "im", *sol.component_labels],
        ([n, E.real, E.imag, *sol.weights[n]] for n, E in enumerate(sol.eigenvalues)),
    )
    rows = list(_eigen_rows(sol, "topological"))
    rows += _eigen_rows(analyze(build_full_heff(p.replace(J0=0.0))), "trivial")
    rows += _eigen_rows(analyze(build_full_heff(p.replace(n_atoms=0))), "bare")
    ctx.csv("eigenvalues.csv", EIGEN_HEADER, rows)
    plus, minus = sol.polaritons()
    ctx.summary["polaritons"] = [complex(sol.eigenvalues[plus]), complex(sol.eigenvalues[minus])]
    ctx.summary["polariton_decay"] = float(sol.decay_rates[plus])

    Ns = np.arange(3, 62, 2)
    rows = []
    for label, J0 in (("J0=6", 30.0), ("J0=8", 40.0), ("J0=10", 50.0), ("trivial", 0.0)):
        for N in Ns:
            E, _ = polariton_decay(p.replace(J0=J0, n_atoms=int(N)))
            rows.append([label, N, -2 * E.imag])
    ctx.csv("decay_vs_N.csv", ["mirror", "N", "decay"], rows)

    rows = []
    for kappa in (10.0, 20.0, 40.0):
        q = without_free_space_decay(p.replace(kappa=kappa))
        bare = -2 * polariton_decay(q.replace(n_atoms=0))[0].imag
        for N in Ns:
            E, _ = polariton_decay(q.replace(n_atoms=int(N)))
            rows.append([kappa, N, -2 * E.imag, -2 * E.imag / bare])
    ctx.csv("bound_polaritons.csv", ["kappa_over_gamma0", "N", "decay_over_Gamma", "ratio_to_bare"], rows)

    rows = []
    for label, J0 in (("J0=8", 40.0), ("J0=10", 50.0), ("trivial", 0.0)):
        s = analyze(build_full_heff(p.replace(J0=J0)))
        n = s.polaritons()[0]
        cells = s.weights[n, 3:]
        rows += [[label, k + 1, w] for k, w in enumerate(cells)]
    ctx.csv("polariton_cells.csv", ["mirror", "cell", "probability"], rows)


# --- fig3 panels -------------------------------------------------------------

def _dynamics(ctx: Context, name: str, p: SystemParams, t_end: float):
    t = np.linspace(0.0, t_end, 4001)
    cols = {}
    for tag, q in (("TO", p), ("bare", p.replace(n_atoms=0))):
        h = build_full_heff(q)
        ts = propagate(h, excite(h), t)
        cols[f"qe_{tag}"] = ts.population("QE")
        cols[f"cavity_{tag}"] = ts.population("CCW") + ts.population("CW")
    cols["free_qe"] = np.exp(-p.gamma0 * t)
    ctx.csv(name, ["t", *cols], zip(t, *cols.values()))
    tau = qe_lifetime(build_full_heff(p)).tau
    tau0 = bare_lifetime(p).tau
    ctx.summary[name] = {"tau_TO": tau, "tau0": tau0, "ratio": tau / tau0}


def fig3a(ctx):
    _dynamics(ctx, "dynamics_weak.csv", preset("fig3-weak"), 3.0)


def fig3b(ctx):
    _dynamics(ctx, "dynamics_strong.csv", preset("fig3-strong"), 3.0)


def fig3c(ctx):
    p = preset("fig3-strong")
    sw = lifetime_enhancement_sweep(p, "varphi", np.linspace(PI, 2 * PI, 201), jobs=ctx.jobs)
    ctx.csv("lifetime_vs_varphi.csv", ["varphi", "ratio", "lower_bound"],
            zip(sw.values, sw.ratio, sw.lower_bound))
    ctx.summary["argmax_varphi_over_pi"] = float(sw.values[np.argmax(sw.ratio)] / PI)


def _spectra(ctx, name, p, extra=None):
    deltas = default_grid(p)
    cols = {}
    for tag, q in (("TO", p), ("bare", p.replace(n_atoms=0))):
        h = build_full_heff(q)
        R, T = reflection_transmission(h, deltas)
        cols[f"R_{tag}"], cols[f"T_{tag}"] = R.values, T.values
        cols[f"S_{tag}"] = emission_spectrum(h, deltas).values
    if extra is not None:
        cols["S_extra"] = emission_spectrum(build_full_heff(extra), deltas).values
    ctx.csv(name, ["delta", *cols], zip(deltas, *cols.values()))


def fig3d(ctx):
    _spectra(ctx, "spectra_weak.csv", preset("fig3-weak"))


def fig3e(ctx):
    p = preset("fig3-strong")
    _spectra(ctx, "spectra_strong.csv", p, extra=p.replace(phi_dim=0.85 * PI))


def _heatmap(ctx, name, sw):
    ctx.csv(name, [sw.axis, "delta", sw.observable],
            ([v, d, x] for v, row in zip(sw.values, sw.data) for d, x in zip(sw.detunings, row)))


def fig3f(ctx):
    p = preset("fig3-strong")
    sw = response_sweep(p, "phi_dim", np.linspace(0, PI, 101), "R",
                        deltas=np.linspace(-80, 80, 801), jobs=ctx.jobs)
    _heatmap(ctx, "reflection_vs_phi.csv", sw)


# --- fig4 panels -------------------------------------------------------------

def fig4a(ctx):
    p = preset("fig3-strong")
    J0s = np.linspace(0, 16, 33) * p.Gamma
    Ns = np.arange(5, 42, 4)
    sw = lifetime_enhancement_sweep(p, "J0,N", J0s, Ns, jobs=ctx.jobs)
    rows = [[J0 / p.Gamma, N, sw.ratio[i, j], sw.tau[i, j] * p.gamma0, sw.lower_bound[i, j]]
            for i, J0 in enumerate(J0s) for j, N in enumerate(Ns)]
    ctx.csv("lifetime_J0_N.csv", ["J0_over_Gamma", "N", "ratio", "tau", "lower_bound"], rows)
    ctx.summary["J0c_over_Gamma"] = critical_J0(p) / p.Gamma


def fig4b(ctx):
    p = preset("fig3-strong")
    sw = response_sweep(p, "J0", np.linspace(0, 16, 81) * p.Gamma, "S",
                        deltas=np.linspace(-60, 60, 1201), jobs=ctx.jobs)
    _heatmap(ctx, "emission_vs_J0.csv", sw)


def fig4c(ctx):
    rows = []
    for phi in (0.3 * PI, 0.2 * PI):
        p = preset("fig3-strong", phi_dim=phi)
        for J0 in np.linspace(4, 16, 49):
            h = build_full_heff(p.replace(J0=J0 * p.Gamma))
            pr = polariton_channel_rates(h)
            lab = pr.by_label("+")
            rows.append([phi / PI, J0, pr.total["+"], lab.get("CavityLike", 0.0),
                         lab.get("OddPolarized", 0.0), lab.get("EvenPolarized", 0.0),
                         lab.get("Background", 0.0)])
    ctx.csv("channel_rates.csv",
            ["phi_over_pi", "J0_over_Gamma", "total", "cavity", "odd", "even", "background"], rows)


# --- fig5 panels -------------------------------------------------------------

def _fig5(ctx, name, spec_kw):
    p = preset("fig3-strong")
    spec = DisorderSpec(seed=ctx.seed, n_realizations=ctx.n_realizations, **spec_kw)
    J0s = np.arange(2, 17, 1.0) * p.Gamma
    res = disorder_sweep(p, spec, "J0", J0s, jobs=ctx.jobs)
    clean = lifetime_enhancement_sweep(p, "J0", J0s, jobs=ctx.jobs)
    ctx.csv(f"{name}.csv", ["J0_over_Gamma", *res.TABLE_HEADER],
            ([v / p.Gamma, *rest] for v, *rest in res.table()))
    ctx.csv(f"{name}_clean.csv", ["J0_over_Gamma", "ratio"], zip(J0s / p.Gamma, clean.ratio))
    inset_d = np.linspace(0.70, 0.80, 11)
    inset = disorder_sweep(p.replace(J0=8 * p.Gamma), spec, "d", inset_d, jobs=ctx.jobs)
    ctx.csv(f"{name}_inset.csv", ["d_over_lambda", *res.TABLE_HEADER], inset.table())
    ctx.summary[name] = {"failed": int(res.failures.sum() + inset.failures.sum())}


def fig5a(ctx):
    _fig5(ctx, "positions", {"position_frac": 0.02})


def fig5b(ctx):
    _fig5(ctx, "couplings", {"coupling_frac": 0.2})


def fig5c(ctx):
    _fig5(ctx, "frequencies", {"frequency_halfwidth": 20.0 / np.sqrt(2.0)})


# --- figS panels -------------------------------------------------------------

def figS2(ctx):
    base = without_free_space_decay(preset("mirror"))
    J0s = np.linspace(0.0, 3.0, 61)
    rows = []
    for label, vp in (("lambda/4", 0.5 * PI), ("3lambda/4", 1.5 * PI)):
        scan = edge_decay_scan(base, J0s, varphi=vp)
        rows += [[label, J, g, loc] for J, g, loc in zip(scan.J0, scan.decay, scan.localized)]
    ctx.csv("edge_decay.csv", ["spacing", "J0_over_Gamma", "decay_over_Gamma", "localized"], rows)

    p = preset("mirror")
    rows = []
    for N in (11, 21, 31, 41):
        R_am = reflection_transmission(build_mirror_heff(p.replace(n_atoms=N, J0=0.0)), [0.0])[0].values[0]
        for J0 in np.linspace(0, 16, 65):
            R = reflection_transmission(build_mirror_heff(p.replace(n_atoms=N, J0=J0 * p.Gamma)), [0.0])[0]
            rows.append([N, J0, R.values[0], R.values[0] / R_am])
    ctx.csv("mirror_reflection.csv", ["N", "J0_over_Gamma", "R_TO", "R_TO_over_R_AM"], rows)
    ctx.summary["R_AM"] = float(R_am)

    rows = []
    for phi in (0.3 * PI, 0.7 * PI):
        for J0 in (2.0, 8.0, 10.0):
            sol = analyze(build_mirror_heff(p.replace(phi_dim=phi, J0=J0 * p.Gamma)))
            n = sol.index_of(EDGE)
            if n is None:
                continue
            prob = np.abs(sol.right_vectors[:, n]) ** 2
            rows += [[phi / PI, J0, j + 1, w] for j, w in enumerate(prob)]
    ctx.csv("edge_states.csv", ["phi_over_pi", "J0_over_Gamma", "atom", "probability"], rows)


def figS3(ctx):
    p = preset("fig3-strong")
    sw = response_sweep(p, "phi_dim", np.linspace(0, PI, 101), "S",
                        deltas=np.linspace(-80, 80, 801), jobs=ctx.jobs)
    _heatmap(ctx, "emission_vs_phi.csv", sw)

    sol = analyze(build_full_heff(p.replace(phi_dim=0.85 * PI)))
    mirror_states = np.flatnonzero(sol.mirror_weight > 0.5)
    near = mirror_states[np.argsort(np.abs(sol.eigenvalues[mirror_states].real))[:2]]
    rows = []
    for n in near:
        prob = np.abs(sol.right_vectors[3:, n]) ** 2
        rows += [[n, sol.eigenvalues[n].real, j + 1, w] for j, w in enumerate(prob)]
    ctx.csv("hybrid_edge_modes.csv", ["state", "re", "atom", "probability"], rows)

    sw = response_sweep(p, "J0", np.linspace(3, 5, 81) * p.Gamma, "S",
                        deltas=np.linspace(-40, 40, 801), jobs=ctx.jobs)
    _heatmap(ctx, "anticrossing.csv", sw)

    q = p.replace(phi_dim=0.33 * PI)
    h = build_full_heff(q)
    deltas = default_grid(q)
    R, T = reflection_transmission(h, deltas)
    S = emission_spectrum(h, deltas)
    ctx.csv("dark_polaritons.csv", ["delta", "R", "T", "S"], zip(deltas, R.values, T.values, S.values))


def figS4(ctx):
    p = preset("fig3-strong")
    h = build_full_heff(p)
    da = dissipation_spectrum(h)
    ctx.csv("dissipation_spectrum.csv", ["m", "chi", "chi_half", "label"],
            ([m + 1, c, 0.5 * c, lab] for m, (c, lab) in enumerate(zip(da.chi, da.channel_labels))))
    radiating = [m for m, lab in enumerate(da.channel_labels) if lab in ("OddPolarized", "EvenPolarized")][:2]
    rows = []
    for m in radiating:
        amp = np.abs(da.channel_vectors[3:, m]) ** 2
        rows += [[m + 1, da.channel_labels[m], j + 1, w] for j, w in enumerate(amp)]
    ctx.csv("radiating_modes.csv", ["m", "label", "atom", "probability"], rows)


FIGURES: dict[str, Callable[[Context], None]] = {
    "fig1-inset": fig1_inset,
    "fig2": fig2,
    "fig3a": fig3a,
    "fig3b": fig3b,
    "fig3c": fig3c,
    "fig3d": fig3d,
    "fig3e": fig3e,
    "fig3f": fig3f,
    "fig4a": fig4a,
    "fig4b": fig4b,
    "fig4c": fig4c,
    "fig5a": fig5a,
    "fig5b": fig5b,
    "fig5c": fig5c,
    "figS2": figS2,
    "figS3": figS3,
    "figS4": figS4,
}


def reproduce(figure: str, out_dir: str | Path, jobs: int = 1, seed: int = 2024,
              n_realizations: int = 100) -> Context:
    if figure not in FIGURES:
        raise KeyError(f"unknown figure {figure!r}; choose from {sorted(FIGURES)}")
    ctx = Context(Path(out_dir), jobs=jobs, seed=seed, n_realizations=n_realizations)
    FIGURES[figure](ctx)
    return ctx
