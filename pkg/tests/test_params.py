import numpy as np
import pytest

import topopolariton as tp
from topopolariton.params import ConfigError, parse_angle, resolve_rates


def test_presets_match_documented_rates():
    p = tp.preset("fig2")
    assert (p.g, p.kappa, p.gamma0, p.Gamma, p.J0, p.n_atoms) == (20, 20, 1, 5, 40, 31)
    assert np.isclose(p.phi_dim, 0.3 * np.pi) and np.isclose(p.varphi, 1.5 * np.pi)
    assert tp.preset("fig3-weak").g == 5 and tp.preset("fig3-weak").J0 == 25
    m = tp.preset("mirror")
    assert m.g == 0 and m.kappa == 0
    with pytest.raises(ConfigError):
        tp.preset("nope")


def test_validation():
    with pytest.raises(ConfigError):
        tp.SystemParams(g=-1)
    with pytest.raises(ConfigError):
        tp.SystemParams(n_atoms=3, detunings=(0, 0))
    with pytest.raises(ConfigError):
        tp.SystemParams(gamma0=0.0)  # unit must become Gamma
    assert tp.preset("fig2", gamma0=0.0).unit == "Gamma"


def test_replace_resets_detunings(fig2):
    p = fig2.replace(detunings=tuple(range(31)))
    q = p.replace(n_atoms=5)
    assert q.detunings == (0.0,) * 5


def test_staggered_couplings():
    J = tp.staggered_couplings(2.0, np.pi / 3, 5)
    assert J.shape == (4,)
    assert np.allclose(J, [1.0, 3.0, 1.0, 3.0])


def test_critical_coupling(fig2):
    assert np.isclose(tp.critical_J0(fig2) / fig2.Gamma, 4.81, atol=0.01)


def test_without_free_space_decay(fig2):
    q = tp.without_free_space_decay(fig2)
    assert q.gamma0 == 0 and q.unit == "Gamma" and q.Gamma == 1.0
    assert np.isclose(q.g, fig2.g / fig2.Gamma)


def test_disorder_is_deterministic_and_per_index(fig2):
    spec = tp.DisorderSpec(position_frac=0.02, coupling_frac=0.1, frequency_halfwidth=2.0, seed=7)
    a = tp.sample_realization(fig2, spec, 3)
    b = tp.sample_realization(fig2, spec, 3)
    c = tp.sample_realization(fig2, spec, 4)
    assert a == b
    assert not np.allclose(a.phases, c.phases)
    clean = tp.clean_realization(fig2)
    # bounded draws
    assert np.all(np.abs(a.phases - clean.phases) <= 0.02 * fig2.varphi + 1e-12)
    assert np.all(np.abs(a.detunings) <= 2.0)
    assert np.all(np.abs(a.bonds - clean.bonds) <= 0.1 * fig2.J0 + 1e-12)


def test_zero_disorder_is_clean(fig2):
    real = tp.sample_realization(fig2, tp.DisorderSpec(seed=1), 0)
    assert real == tp.clean_realization(fig2)


def test_disorder_spec_rejects_reordering():
    with pytest.raises(ConfigError):
        tp.DisorderSpec(position_frac=0.5)


def test_angles_and_rates():
    assert np.isclose(parse_angle("0.3pi"), 0.3 * np.pi)
    assert np.isclose(parse_angle("pi"), np.pi)
    assert parse_angle("1.25") == 1.25
    with pytest.raises(ConfigError):
        parse_angle("abc")
    r = resolve_rates({"Gamma": "4 g0", "gamma0": "0.5", "J0": "8Gamma"})
    assert r == {"Gamma": 2.0, "gamma0": 0.5, "J0": 16.0}
    with pytest.raises(ConfigError):
        resolve_rates({"Gamma": "2g0", "gamma0": "1Gamma"})


def test_config_file(tmp_path):
    text = """
[run]
preset = fig3-weak
[system]
J0 = 6 Gamma
phi_dim = 0.2pi
n_atoms = 11
[disorder]
frequency_halfwidth = 2 g0
seed = 0x10
n_realizations = 5
"""
    f = tmp_path / "c.ini"
    f.write_text(text)
    cfg = tp.load_config(f)
    assert cfg.preset_name == "fig3-weak"
    assert cfg.system.g == 5 and cfg.system.J0 == 30 and cfg.system.n_atoms == 11
    assert len(cfg.system.detunings) == 11
    assert cfg.disorder.frequency_halfwidth == 2 and cfg.disorder.seed == 16
    assert cfg.to_dict()["system"]["J0"] == 30


@pytest.mark.parametrize("text", ["[system]\nfoo = 1\n", "[other]\n", "[run]\npreset = x\n", "[system\n"])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        tp.parse_config_text(text)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        tp.load_config(tmp_path / "missing.ini")
