"""Cavity QED coupled chirally to a topological (SSH) atom mirror.

Single-excitation effective Hamiltonians, their spectra, dynamics, scattering,
dissipation channels and disorder ensembles.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("topopolariton")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .dissipation import DissipationAnalysis, PolaritonRates, dissipation_spectrum, polariton_channel_rates
from .dynamics import (
    Lifetime,
    TimeSeries,
    bare_lifetime,
    excite,
    lifetime,
    lifetime_enhancement_sweep,
    propagate,
    qe_lifetime,
    qe_population,
)
from .ensemble import EnsembleResult, disorder_sweep
from .hamiltonian import EffectiveHamiltonian, build_full_heff, build_mirror_heff, channel_vectors
from .params import (
    PRESETS,
    ConfigError,
    DisorderSpec,
    MirrorRealization,
    RunConfig,
    SystemParams,
    clean_realization,
    critical_J0,
    load_config,
    parse_config_text,
    preset,
    sample_realization,
    staggered_couplings,
    without_free_space_decay,
)
from .response import (
    SpectrumSeries,
    emission_integral,
    emission_spectrum,
    reflection_transmission,
    response_sweep,
    steady_state,
)
from .spectral import EigenSolution, NearDefectiveWarning, analyze, band_sweep_vs_spacing, classify, edge_decay_scan, eigendecompose

__all__ = [name for name in dir() if not name.startswith("_") and name not in ("version", "PackageNotFoundError")]
