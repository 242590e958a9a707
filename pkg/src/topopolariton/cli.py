"""Command-line front end.

Every command writes CSV data plus a ``manifest.json`` holding the resolved
configuration, seeds, wall time and SHA-256 hashes of the outputs.

Exit codes: 0 ok, 1 configuration error, 2 numerical failure, 3 partial sweep.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, io
from .dissipation import dissipation_spectrum, polariton_channel_rates
from .dynamics import IntegrationError, bare_lifetime, excite, lifetime_enhancement_sweep, propagate, qe_lifetime
from .ensemble import disorder_sweep
from .figures import FIGURES, reproduce
from .hamiltonian import build_full_heff, build_mirror_heff
from .params import (
    PRESETS,
    ConfigError,
    DisorderSpec,
    RunConfig,
    _split_rate,
    _system_from_section,
    load_config,
    parse_angle,
    parse_config_text,
)
from .response import default_grid, emission_spectrum, reflection_transmission, response_sweep
from .spectral import analyze, band_sweep_vs_spacing

log = logging.getLogger("topopolariton")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PARTIAL = 0, 1, 2, 3

SYSTEM_FLAGS = ("g", "kappa", "gamma0", "Gamma", "J0", "phi_dim", "n_atoms", "varphi", "phi1", "unit")
DISORDER_FLAGS = ("position_frac", "coupling_frac", "frequency_halfwidth", "n_realizations")
ANGLE_AXES = ("phi_dim", "varphi")
REPRODUCE_SEED = 2024


class Partial(Exception):
    """Some sweep points failed; outputs were still written."""


# --- argument handling ---------------------------------------------------------

def parse_grid(text: str, cfg: RunConfig | None = None) -> tuple[str, np.ndarray]:
    """``axis=start:stop:count`` into ``(axis, linspace)``.

    Angle axes accept ``pi`` multiples; rate axes accept ``g0``/``Gamma`` suffixes.
    """
    try:
        axis, rng = text.split("=", 1)
        start, stop, count = rng.split(":")
        count = int(count)
    except ValueError:
        raise ConfigError(f"bad --grid {text!r}; expected axis=start:stop:count") from None
    if count < 1:
        raise ConfigError(f"--grid {text!r}: count must be positive")
    axis = axis.strip()

    def number(s: str) -> float:
        if axis in ANGLE_AXES:
            return parse_angle(s)
        value, suffix = _split_rate(s)
        if suffix and cfg is not None:
            value *= cfg.system.gamma0 if suffix == "g0" else cfg.system.Gamma
        return value

    return axis, np.linspace(number(start), number(stop), count)


def grids(args, cfg: RunConfig) -> dict[str, np.ndarray]:
    out = {}
    for g in args.grid or []:
        axis, values = parse_grid(g, cfg)
        out[axis] = values
    return out


def resolve(args) -> RunConfig:
    """Config file, then preset, then per-field flags (each flag replaces one key)."""
    if args.config:
        cfg = load_config(args.config, preset_name=args.preset)
    else:
        cfg = parse_config_text("", preset_name=args.preset or "fig2")
    section = {k: str(getattr(args, k)) for k in SYSTEM_FLAGS if getattr(args, k) is not None}
    if section:
        values = _system_from_section(section, cfg.system.to_dict())
        if values.get("gamma0") == 0 and "unit" not in section:
            values["unit"] = "Gamma"
        cfg.system = type(cfg.system)(**values)
    dis = {k: getattr(args, k) for k in DISORDER_FLAGS if getattr(args, k) is not None}
    if dis or args.seed is not None:
        base = cfg.disorder.to_dict() if cfg.disorder else {}
        base.update(dis)
        if args.seed is not None:
            base["seed"] = args.seed
        cfg.disorder = DisorderSpec(**base)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with [system], [disorder], [run] sections")
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--seed", type=int, help="disorder seed")
    common.add_argument("--out-dir", default="out", help="output directory")
    common.add_argument("--grid", action="append", metavar="AXIS=START:STOP:COUNT")
    common.add_argument("--mirror", action="store_true", help="bare atom mirror without the cavity")
    common.add_argument("-v", "--verbose", action="store_true")
    for name in SYSTEM_FLAGS:
        common.add_argument(f"--{name.replace('_', '-')}", dest=name, metavar="VALUE")
    for name in ("position_frac", "coupling_frac", "frequency_halfwidth"):
        common.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)
    common.add_argument("--n-realizations", dest="n_realizations", type=int)

    ap = argparse.ArgumentParser(prog="topopolariton", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("eigen", parents=[common], help="eigenvalues and classification")
    sub.add_parser("bands", parents=[common], help="mirror bands versus spacing (grid d)")
    sub.add_parser("dynamics", parents=[common], help="populations after exciting the QE (grid t)")
    sub.add_parser("lifetime", parents=[common], help="QE lifetime; grid varphi, J0 or N for sweeps")
    sub.add_parser("scatter", parents=[common], help="reflection and transmission (grid delta)")
    sub.add_parser("emission", parents=[common], help="QE emission spectrum (grid omega)")
    sub.add_parser("dissipation", parents=[common], help="dissipation channels and polariton rates")
    p = sub.add_parser("disorder", parents=[common], help="disorder ensemble (grid J0 or d)")
    p.add_argument("--allow-combined", action="store_true")
    p = sub.add_parser("sweep", parents=[common], help="R/T/S heatmap (grid phi_dim or J0, optional delta)")
    p.add_argument("--observable", choices=("R", "T", "S"), default="R")
    p = sub.add_parser("reproduce", parents=[common], help="regenerate the data behind a figure")
    p.add_argument("figure", choices=[*FIGURES, "all"])
    return ap


# --- commands -------------------------------------------------------------------

def _heff(cfg: RunConfig, args):
    return build_mirror_heff(cfg.system) if args.mirror else build_full_heff(cfg.system)


def cmd_eigen(cfg, args, out: Path, written: list, summary: dict):
    h = _heff(cfg, args)
    sol = analyze(h)
    written.append(io.write_records(out / "eigenvalues.csv", list(sol.rows())))
    summary["condition"] = sol.condition
    summary["ambiguous"] = sol.ambiguous


def cmd_bands(cfg, args, out, written, summary):
    d = grids(args, cfg).get("d", np.linspace(0.0, 1.0, 201))
    bands = band_sweep_vs_spacing(cfg.system, d)
    rows = ([x, n, e] for x, row in zip(d, bands) for n, e in enumerate(row))
    written.append(io.write_csv(out / "bands.csv", ["d_over_lambda", "band", "re"], rows))


def cmd_dynamics(cfg, args, out, written, summary):
    h = build_full_heff(cfg.system)
    t = grids(args, cfg).get("t", np.linspace(0.0, 3.0 / cfg.system.time_unit_rate, 4001))
    ts = propagate(h, excite(h), t)
    labels = list(h.basis_labels)
    written.append(io.write_csv(out / "populations.csv", ["t", *labels, "total"],
                                (
                                    [ti, *row, tot]
                                    for ti, row, tot in zip(t, ts.populations, ts.total)
                                )))
    summary["method"] = ts.method


def cmd_lifetime(cfg, args, out, written, summary):
    g = grids(args, cfg)
    p = cfg.system
    if "J0" in g and "N" in g:
        sw = lifetime_enhancement_sweep(p, "J0,N", g["J0"], g["N"].round().astype(int), jobs=args.jobs)
        J0s, Ns = sw.values
        rows = ([a, int(b), sw.tau[i, j], sw.ratio[i, j], sw.lower_bound[i, j]]
                for i, a in enumerate(J0s) for j, b in enumerate(Ns))
        written.append(io.write_csv(out / "lifetime.csv", ["J0", "N", "tau", "ratio", "lower_bound"], rows))
    elif g:
        axis = next(iter(g))
        vals = g[axis].round().astype(int) if axis == "N" else g[axis]
        sw = lifetime_enhancement_sweep(p, axis, vals, jobs=args.jobs)
        written.append(io.write_csv(out / "lifetime.csv", [axis, "tau", "ratio", "n_maxima", "lower_bound"],
                                    zip(sw.values, sw.tau, sw.ratio, sw.n_maxima, sw.lower_bound)))
    else:
        res = qe_lifetime(build_full_heff(p))
        tau0 = bare_lifetime(p).tau
        written.append(io.write_csv(out / "lifetime.csv", ["tau", "tau0", "ratio", "n_maxima", "lower_bound"],
                                    [[res.tau, tau0, res.tau / tau0, res.n_maxima, res.lower_bound]]))
        summary.update(tau=res.tau, tau0=tau0, ratio=res.tau / tau0)


def cmd_scatter(cfg, args, out, written, summary):
    deltas = grids(args, cfg).get("delta", default_grid(cfg.system, mirror_only=args.mirror))
    R, T = reflection_transmission(_heff(cfg, args), deltas)
    written.append(io.write_csv(out / "scatter.csv", ["delta", "R", "T"], zip(deltas, R.values, T.values)))


def cmd_emission(cfg, args, out, written, summary):
    omegas = grids(args, cfg).get("omega", default_grid(cfg.system))
    S = emission_spectrum(build_full_heff(cfg.system), omegas)
    written.append(io.write_csv(out / "emission.csv", ["omega", "S"], zip(omegas, S.values)))


def cmd_dissipation(cfg, args, out, written, summary):
    h = _heff(cfg, args)
    da = dissipation_spectrum(h)
    written.append(io.write_csv(out / "dissipation.csv", ["m", "chi", "chi_half", "label"],
                                ([m + 1, c, 0.5 * c, lab]
                                 for m, (c, lab) in enumerate(zip(da.chi, da.channel_labels)))))
    if h.has_cavity and h.n_atoms:
        pr = polariton_channel_rates(h, analysis=da)
        rows = ([m + 1, da.channel_labels[m], pr.per_channel["+"][m], pr.per_channel["-"][m]]
                for m in range(len(da.chi)))
        written.append(io.write_csv(out / "polariton_rates.csv", ["m", "label", "rate_plus", "rate_minus"], rows))
        summary.update(total=pr.total, quadratic=pr.quadratic, ambiguous=pr.ambiguous)


def cmd_disorder(cfg, args, out, written, summary):
    if cfg.disorder is None or not cfg.disorder.kinds:
        raise ConfigError("disorder needs a [disorder] section or disorder flags")
    g = grids(args, cfg)
    axis = "d" if "d" in g else "J0"
    values = g.get(axis, np.array([cfg.system.J0]))
    res = disorder_sweep(cfg.system, cfg.disorder, axis, values, jobs=args.jobs,
                         allow_combined=args.allow_combined)
    written.append(io.write_csv(out / "disorder.csv", [axis, *res.TABLE_HEADER], res.table()))
    written.append(io.write_csv(out / "realizations.csv", [axis, "realization", "ratio", "censored"],
                                ([v, k, res.ratios[i, k], res.censored[i, k]]
                                 for i, v in enumerate(values) for k in range(res.n_realizations))))
    summary["tau0"] = res.tau0
    if res.failures.sum():
        raise Partial(f"{int(res.failures.sum())} realizations failed")


def cmd_sweep(cfg, args, out, written, summary):
    g = grids(args, cfg)
    axes = [a for a in g if a in ("phi_dim", "J0")]
    if len(axes) != 1:
        raise ConfigError("sweep needs exactly one --grid over phi_dim or J0")
    sw = response_sweep(cfg.system, axes[0], g[axes[0]], args.observable, deltas=g.get("delta"),
                        mirror_only=args.mirror, jobs=args.jobs)
    rows = ([v, d, x] for v, row in zip(sw.values, sw.data) for d, x in zip(sw.detunings, row))
    written.append(io.write_csv(out / "sweep.csv", [sw.axis, "delta", sw.observable], rows))


def cmd_reproduce(cfg, args, out, written, summary):
    seed = REPRODUCE_SEED if args.seed is None else args.seed
    n_real = args.n_realizations or 100
    figures = list(FIGURES) if args.figure == "all" else [args.figure]
    for fig in figures:
        ctx = reproduce(fig, out / fig, jobs=args.jobs, seed=seed, n_realizations=n_real)
        written.extend(ctx.written)
        summary[fig] = ctx.summary
    summary["seed"] = seed
    summary["n_realizations"] = n_real


COMMANDS = {
    "eigen": cmd_eigen,
    "bands": cmd_bands,
    "dynamics": cmd_dynamics,
    "lifetime": cmd_lifetime,
    "scatter": cmd_scatter,
    "emission": cmd_emission,
    "dissipation": cmd_dissipation,
    "disorder": cmd_disorder,
    "sweep": cmd_sweep,
    "reproduce": cmd_reproduce,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here that is a configuration error
        return EXIT_CONFIG if exc.code == 2 else int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    out = Path(args.out_dir)
    written: list[Path] = []
    summary: dict = {}
    code = EXIT_OK
    try:
        cfg = resolve(args)
        COMMANDS[args.command](cfg, args, out, written, summary)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Partial as exc:
        print(f"partial: {exc}", file=sys.stderr)
        code = EXIT_PARTIAL
    except (np.linalg.LinAlgError, IntegrationError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        code = EXIT_NUMERIC
    info = {
        "command": args.command,
        "argv": list(sys.argv[1:] if argv is None else argv),
        "config": cfg.to_dict(),
        "preset": cfg.preset_name,
        "version": __version__,
        "seeds": {"disorder": cfg.disorder.seed if cfg.disorder else None},
        "jobs": args.jobs,
        "wall_time_s": time.perf_counter() - start,
        "exit_code": code,
        "summary": summary,
    }
    if args.command == "reproduce":
        info["figure"] = args.figure
    out.mkdir(parents=True, exist_ok=True)
    io.write_manifest(out / "manifest.json", info, written)
    for p in written:
        print(p)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
