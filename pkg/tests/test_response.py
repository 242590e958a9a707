import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import topopolariton as tp
from topopolariton.response import (
    default_grid,
    emission_spectrum_eigen,
    peak_fwhm,
    reflection_transmission_eigen,
)
from conftest import random_params


def test_single_atom_reflection_oracle():
    p = tp.preset("mirror", n_atoms=1)
    d = np.linspace(-20, 20, 401)
    R, T = tp.reflection_transmission(tp.build_mirror_heff(p), d)
    r = -p.Gamma / (p.Gamma + p.gamma0 / 2 - 1j * d)
    assert np.max(np.abs(R.amplitude - r)) < 1e-10


def test_flux_conservation_lossless(fig2):
    p = tp.without_free_space_decay(fig2)
    d = default_grid(p)
    R, T = tp.reflection_transmission(tp.build_full_heff(p), d)
    assert np.max(np.abs(R.values + T.values - 1)) < 1e-8


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_passivity(seed):
    p = random_params(np.random.default_rng(seed))
    R, T = tp.reflection_transmission(tp.build_full_heff(p), np.linspace(-50, 50, 101))
    assert np.all(R.values + T.values <= 1 + 1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lossless_flux_property(seed):
    p = random_params(np.random.default_rng(seed), gamma0_zero=True)
    R, T = tp.reflection_transmission(tp.build_full_heff(p), np.linspace(-50, 50, 101))
    assert np.max(np.abs(R.values + T.values - 1)) < 1e-8


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.2, 5))
def test_spectra_unit_covariance(seed, c):
    p = random_params(np.random.default_rng(seed))
    d = np.linspace(-20, 20, 41)
    R1, T1 = tp.reflection_transmission(tp.build_full_heff(p), d)
    R2, T2 = tp.reflection_transmission(tp.build_full_heff(p.scaled(c)), c * d)
    assert np.max(np.abs(R1.values - R2.values)) < 1e-10
    assert np.max(np.abs(T1.values - T2.values)) < 1e-10


def test_bare_emitter_lorentzian():
    p = tp.preset("fig2", g=0.0, n_atoms=0)
    w = np.linspace(-10, 10, 2001)
    S = tp.emission_spectrum(tp.build_full_heff(p), w).values
    L = (p.gamma0 / 2) / (w**2 + p.gamma0**2 / 4)
    assert np.max(np.abs(S - L)) < 1e-8


@pytest.mark.parametrize("name", sorted(set(tp.PRESETS) - {"mirror"}))
def test_sum_rule(name):
    assert tp.emission_integral(tp.build_full_heff(tp.preset(name))) == pytest.approx(np.pi, rel=1e-6)


def test_eigen_crosschecks(fig2):
    h = tp.build_full_heff(fig2)
    w = default_grid(fig2, n=501)
    S = tp.emission_spectrum(h, w).values
    assert np.max(np.abs(S - emission_spectrum_eigen(h, w))) < 1e-8
    R, T = tp.reflection_transmission(h, w)
    Re, Te = reflection_transmission_eigen(h, w)
    assert np.max(np.abs(R.values - Re)) < 1e-8 and np.max(np.abs(T.values - Te)) < 1e-8


def test_steady_state_solves_linear_system(fig2):
    h = tp.build_full_heff(fig2.replace(n_atoms=5))
    s = tp.steady_state(h, 3.0)
    P = np.zeros(h.dim, complex)
    P[1] = np.sqrt(fig2.kappa)
    P[3:] = np.sqrt(fig2.Gamma) * np.exp(1j * tp.clean_realization(fig2.replace(n_atoms=5)).phases)
    assert np.allclose((3.0 * np.eye(h.dim) - h.matrix) @ s, -1j * P)


def test_peak_fwhm_lorentzian():
    x = np.linspace(-10, 10, 20001)
    y = 1 / (x**2 + 0.25)
    loc, width = peak_fwhm(x, y, 0.3)
    assert abs(loc) < 1e-9 and abs(width - 1.0) < 1e-3


def test_response_sweep(fig2):
    p = fig2.replace(n_atoms=5)
    d = np.linspace(-5, 5, 11)
    sw = tp.response_sweep(p, "J0", [0.0, 40.0], "T", deltas=d)
    assert sw.data.shape == (2, 11)
    R, T = tp.reflection_transmission(tp.build_full_heff(p.replace(J0=40.0)), d)
    assert np.array_equal(sw.data[1], T.values)
    par = tp.response_sweep(p, "J0", [0.0, 40.0], "T", deltas=d, jobs=2)
    assert np.array_equal(par.data, sw.data)
    with pytest.raises(ValueError):
        tp.response_sweep(p, "g", [1.0])
    with pytest.raises(ValueError):
        tp.response_sweep(p, "J0", [1.0], observable="X")


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi))
def test_global_output_phase_invariance(seed, theta):
    from topopolariton.response import output_vectors
    p = random_params(np.random.default_rng(seed))
    h = tp.build_full_heff(p)
    d = np.linspace(-10, 10, 21)
    s = tp.steady_state(h, d)
    r_vec, t_vec, through = output_vectors(h)
    u = np.exp(1j * theta)
    R, T = tp.reflection_transmission(h, d)
    assert np.allclose(np.abs(s @ (u * r_vec)) ** 2, R.values, atol=1e-12)
    assert np.allclose(np.abs(u * through + s @ (u * t_vec)) ** 2, T.values, atol=1e-12)
