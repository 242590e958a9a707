"""Physical parameters, presets, disorder sampling and configuration files.

All frequencies live in the frame rotating at the cavity frequency, so the
cavity sits at zero detuning and every rate shares one unit (``gamma0`` by
default, ``Gamma`` when the free-space decay is switched off).
"""

from __future__ import annotations

import configparser
import dataclasses
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

RATE_FIELDS = ("g", "kappa", "gamma0", "Gamma", "J0")
UNITS = ("gamma0", "Gamma")


class ConfigError(ValueError):
    """Invalid parameters or configuration file contents."""


@dataclass(frozen=True)
class SystemParams:
    """One network instance: cavity QED block plus a dimerized atom mirror.

    ``J0`` is an absolute rate (``8*Gamma`` for the main presets), ``phi_dim``
    sets the dimerization, ``varphi`` is the inter-atom propagation phase and
    ``phi1`` the phase from the cavity junction to the first atom.
    """

    g: float = 20.0
    kappa: float = 20.0
    gamma0: float = 1.0
    Gamma: float = 5.0
    J0: float = 40.0
    phi_dim: float = 0.3 * np.pi
    n_atoms: int = 31
    varphi: float = 1.5 * np.pi
    phi1: float = 0.0
    detunings: tuple[float, ...] | None = None
    unit: str = "gamma0"

    def __post_init__(self):
        for name in RATE_FIELDS:
            value = float(getattr(self, name))
            if not np.isfinite(value) or value < 0:
                raise ConfigError(f"{name} must be a finite non-negative rate, got {value}")
            object.__setattr__(self, name, value)
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 0:
            raise ConfigError(f"n_atoms must be a non-negative integer, got {self.n_atoms}")
        object.__setattr__(self, "n_atoms", int(self.n_atoms))
        if self.unit not in UNITS:
            raise ConfigError(f"unit must be one of {UNITS}, got {self.unit!r}")
        if self.gamma0 == 0 and self.unit != "Gamma":
            raise ConfigError("gamma0 = 0 requires unit = 'Gamma'")
        if self.detunings is None:
            det = (0.0,) * self.n_atoms
        else:
            det = tuple(float(x) for x in self.detunings)
        if len(det) != self.n_atoms:
            raise ConfigError(f"expected {self.n_atoms} detunings, got {len(det)}")
        object.__setattr__(self, "detunings", det)
        for name in ("phi_dim", "varphi", "phi1"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def replace(self, **changes) -> "SystemParams":
        """Copy with fields changed; a new ``n_atoms`` resets the detunings."""
        if "n_atoms" in changes and "detunings" not in changes:
            changes["detunings"] = None
        if changes.get("gamma0", self.gamma0) == 0 and "unit" not in changes:
            changes["unit"] = "Gamma"
        return dataclasses.replace(self, **changes)

    def scaled(self, c: float) -> "SystemParams":
        """All rates (and detunings) multiplied by ``c``."""
        rates = {name: getattr(self, name) * c for name in RATE_FIELDS}
        return dataclasses.replace(self, detunings=tuple(c * d for d in self.detunings), **rates)

    @property
    def time_unit_rate(self) -> float:
        """Rate whose inverse is the natural time unit."""
        return self.gamma0 if self.unit == "gamma0" else self.Gamma

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["detunings"] = list(self.detunings)
        return d


@dataclass(frozen=True)
class DisorderSpec:
    """I.i.d. uniform disorder of atom positions, bonds and frequencies.

    ``position_frac`` and ``coupling_frac`` are fractions of the spacing and of
    ``J0``; ``frequency_halfwidth`` is an absolute rate.
    """

    position_frac: float = 0.0
    coupling_frac: float = 0.0
    frequency_halfwidth: float = 0.0
    seed: int = 0
    n_realizations: int = 100

    def __post_init__(self):
        for name in ("position_frac", "coupling_frac", "frequency_halfwidth"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value < 0:
                raise ConfigError(f"{name} must be finite and >= 0, got {value}")
            object.__setattr__(self, name, value)
        if self.position_frac >= 0.5:
            raise ConfigError("position_frac must be < 0.5 so atoms cannot reorder")
        if int(self.n_realizations) != self.n_realizations or self.n_realizations < 1:
            raise ConfigError("n_realizations must be a positive integer")
        object.__setattr__(self, "n_realizations", int(self.n_realizations))
        object.__setattr__(self, "seed", int(self.seed) & 0xFFFFFFFFFFFFFFFF)

    @property
    def kinds(self) -> tuple[str, ...]:
        """Names of the disorder types that are switched on."""
        out = []
        if self.position_frac > 0:
            out.append("positions")
        if self.coupling_frac > 0:
            out.append("couplings")
        if self.frequency_halfwidth > 0:
            out.append("frequencies")
        return tuple(out)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class MirrorRealization:
    """Per-atom phases, bond strengths and detunings of one mirror instance."""

    phases: np.ndarray
    bonds: np.ndarray
    detunings: np.ndarray
    index: int | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("phases", "bonds", "detunings"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = len(self.phases)
        if len(self.detunings) != n or len(self.bonds) != max(n - 1, 0):
            raise ConfigError(
                f"inconsistent realization lengths: {n} phases, "
                f"{len(self.bonds)} bonds, {len(self.detunings)} detunings"
            )

    @property
    def n_atoms(self) -> int:
        return len(self.phases)

    def __eq__(self, other):
        if not isinstance(other, MirrorRealization):
            return NotImplemented
        return (
            np.array_equal(self.phases, other.phases)
            and np.array_equal(self.bonds, other.bonds)
            and np.array_equal(self.detunings, other.detunings)
        )

    __hash__ = None


def staggered_couplings(J0: float, phi_dim: float, n_atoms: int) -> np.ndarray:
    """Dimerized bonds ``J_j``: ``J0(1 - cos phi)`` for odd j, ``J0(1 + cos phi)`` for even j."""
    if n_atoms < 1:
        raise ConfigError("staggered_couplings needs at least one atom")
    j = np.arange(1, n_atoms)
    sign = np.where(j % 2 == 1, -1.0, 1.0)
    return J0 * (1.0 + sign * np.cos(phi_dim))


def clean_realization(params: SystemParams) -> MirrorRealization:
    n = params.n_atoms
    phases = params.phi1 + params.varphi * np.arange(n)
    bonds = staggered_couplings(params.J0, params.phi_dim, n) if n else np.zeros(0)
    return MirrorRealization(phases, bonds, np.array(params.detunings, dtype=float))


def realization_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for realization ``index``; independent of draw order."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])
    return np.random.Generator(np.random.Philox(ss))


def sample_realization(params: SystemParams, spec: DisorderSpec, index: int) -> MirrorRealization:
    """Clean geometry plus uniform perturbations drawn from stream ``(seed, index)``.

    Each atom is displaced independently by ``varphi * position_frac * u``; every
    bond gets ``J0 * coupling_frac * u`` and every detuning
    ``frequency_halfwidth * u``, with ``u`` uniform in [-1, 1). All three arrays are
    always drawn so switching one disorder type on never shifts the others.
    """
    if not 0 <= index < spec.n_realizations:
        raise ConfigError(f"realization index {index} outside [0, {spec.n_realizations})")
    clean = clean_realization(params)
    n = params.n_atoms
    rng = realization_rng(spec.seed, index)
    u_pos = rng.uniform(-1.0, 1.0, n)
    u_bond = rng.uniform(-1.0, 1.0, max(n - 1, 0))
    u_freq = rng.uniform(-1.0, 1.0, n)
    phases = clean.phases + params.varphi * spec.position_frac * u_pos
    bonds = clean.bonds + params.J0 * spec.coupling_frac * u_bond
    detunings = clean.detunings + spec.frequency_halfwidth * u_freq
    return MirrorRealization(phases, bonds, detunings, index=index)


# --- presets -----------------------------------------------------------------

_FIG2 = dict(
    g=20.0, kappa=20.0, gamma0=1.0, Gamma=5.0, J0=40.0,
    phi_dim=0.3 * np.pi, n_atoms=31, varphi=1.5 * np.pi, phi1=0.0,
)

PRESETS: dict[str, dict[str, Any]] = {
    "fig2": _FIG2,
    "fig3-strong": _FIG2,
    "fig3-weak": {**_FIG2, "g": 5.0, "J0": 25.0},
    # bare atom mirror used for the edge-state and mirror reflectivity studies
    "mirror": {**_FIG2, "g": 0.0, "kappa": 0.0},
}


def preset(name: str, **overrides) -> SystemParams:
    try:
        base = dict(PRESETS[name])
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    base.update(overrides)
    if base.get("gamma0") == 0 and "unit" not in base:
        base["unit"] = "Gamma"
    return SystemParams(**base)


def without_free_space_decay(params: SystemParams) -> SystemParams:
    """Same system with ``gamma0 = 0``, re-expressed in units of ``Gamma``."""
    c = 1.0 / params.Gamma
    return params.scaled(c).replace(gamma0=0.0, unit="Gamma")


def critical_J0(params: SystemParams) -> float:
    """``J0`` at which the SSH gap ``4 J0 cos(phi)`` equals the Rabi splitting ``2 sqrt(2) g``."""
    return params.g / (np.sqrt(2.0) * np.cos(params.phi_dim))


# --- configuration files -----------------------------------------------------

_RATE_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*(g0|gamma0|Gamma)?\s*$")
_ANGLE_RE = re.compile(r"^\s*([-+0-9.eE]*)\s*\*?\s*(pi)?\s*$")


def parse_angle(text: str) -> float:
    """``"0.3pi"``, ``"1.5*pi"``, ``"pi"`` or a plain number of radians."""
    m = _ANGLE_RE.match(str(text))
    if not m or (not m.group(1) and not m.group(2)):
        raise ConfigError(f"cannot parse angle {text!r}")
    value = float(m.group(1)) if m.group(1) not in ("", "+", "-") else float(m.group(1) + "1")
    return value * np.pi if m.group(2) else value


def _split_rate(text: str) -> tuple[float, str | None]:
    m = _RATE_RE.match(str(text))
    if not m:
        raise ConfigError(f"cannot parse rate {text!r}")
    suffix = m.group(2)
    if suffix == "gamma0":
        suffix = "g0"
    return float(m.group(1)), suffix


def resolve_rates(raw: dict[str, str]) -> dict[str, float]:
    """Turn ``{"g": "20 g0", "J0": "8Gamma", ...}`` into plain numbers.

    Suffixes multiply by the resolved value of ``gamma0`` or ``Gamma`` (defaults
    1 and 5 when absent); bare numbers are taken in the working unit.
    """
    parsed = {k: _split_rate(v) for k, v in raw.items()}
    defaults = {"gamma0": 1.0, "Gamma": 5.0}
    suffix_base = {"g0": "gamma0", "Gamma": "Gamma"}

    def value_of(name: str, stack: tuple[str, ...] = ()) -> float:
        if name not in parsed:
            return defaults[name]
        if name in stack:
            raise ConfigError("gamma0 and Gamma are defined in terms of each other")
        number, suffix = parsed[name]
        if suffix is None:
            return number
        return number * value_of(suffix_base[suffix], stack + (name,))

    return {name: value_of(name) for name in parsed}


_SYSTEM_KEYS = {f.name for f in dataclasses.fields(SystemParams)}
_DISORDER_KEYS = {f.name for f in dataclasses.fields(DisorderSpec)}


def _system_from_section(section: dict[str, str], base: dict[str, Any]) -> dict[str, Any]:
    unknown = set(section) - _SYSTEM_KEYS
    if unknown:
        raise ConfigError(f"unknown [system] keys: {sorted(unknown)}")
    out = dict(base)
    rates = {k: v for k, v in section.items() if k in RATE_FIELDS}
    if rates:
        # suffixed rates refer to the base values when the file omits gamma0/Gamma
        defaults = {k: str(base[k]) for k in ("gamma0", "Gamma") if k in base and k not in rates}
        out.update({k: v for k, v in resolve_rates({**defaults, **rates}).items() if k in rates})
    for key in ("phi_dim", "varphi", "phi1"):
        if key in section:
            out[key] = parse_angle(section[key])
    if "n_atoms" in section:
        out["n_atoms"] = int(section["n_atoms"])
        out["detunings"] = None
    if "detunings" in section:
        items = [s for s in re.split(r"[,\s]+", section["detunings"].strip()) if s]
        out["detunings"] = tuple(float(x) for x in items)
    if "unit" in section:
        out["unit"] = section["unit"].strip()
    return out


@dataclass
class RunConfig:
    """Parsed configuration: system, optional disorder, and free-form run keys."""

    system: SystemParams
    disorder: DisorderSpec | None = None
    run: dict[str, str] = field(default_factory=dict)
    preset_name: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "preset": self.preset_name,
            "system": self.system.to_dict(),
            "disorder": self.disorder.to_dict() if self.disorder else None,
            "run": dict(self.run),
        }


def parse_config_text(text: str, preset_name: str | None = None) -> RunConfig:
    """Parse an INI-style file with ``[system]``, ``[disorder]`` and ``[run]`` sections.

    ``[run] preset = fig2`` (or the ``preset_name`` argument) selects the base
    values that ``[system]`` keys then override.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    extra = set(cp.sections()) - {"system", "disorder", "run"}
    if extra:
        raise ConfigError(f"unknown sections: {sorted(extra)}")
    run = dict(cp["run"]) if cp.has_section("run") else {}
    name = preset_name or run.get("preset")
    if name and name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    base = dict(PRESETS[name]) if name else dict(_FIG2)
    system_section = dict(cp["system"]) if cp.has_section("system") else {}
    values = _system_from_section(system_section, base)
    if values.get("gamma0") == 0 and "unit" not in values:
        values["unit"] = "Gamma"
    try:
        system = SystemParams(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    disorder = None
    if cp.has_section("disorder"):
        sec = dict(cp["disorder"])
        unknown = set(sec) - _DISORDER_KEYS
        if unknown:
            raise ConfigError(f"unknown [disorder] keys: {sorted(unknown)}")
        kw: dict[str, Any] = {}
        for key in ("position_frac", "coupling_frac"):
            if key in sec:
                kw[key] = float(sec[key])
        if "frequency_halfwidth" in sec:
            value, suffix = _split_rate(sec["frequency_halfwidth"])
            if suffix == "g0":
                value *= system.gamma0
            elif suffix == "Gamma":
                value *= system.Gamma
            kw["frequency_halfwidth"] = value
        if "seed" in sec:
            kw["seed"] = int(sec["seed"], 0)
        if "n_realizations" in sec:
            kw["n_realizations"] = int(sec["n_realizations"])
        disorder = DisorderSpec(**kw)
    return RunConfig(system=system, disorder=disorder, run=run, preset_name=name)


def load_config(path: str | Path, preset_name: str | None = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, preset_name=preset_name)
