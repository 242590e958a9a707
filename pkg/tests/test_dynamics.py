import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import topopolariton as tp
from topopolariton.dynamics import local_maxima
from conftest import random_params


def test_pure_exponential_lifetime():
    t = np.linspace(0, 5, 5001)
    res = tp.lifetime(t, np.exp(-2.0 * t))
    assert abs(res.tau - 0.5) < 1e-6 and not res.lower_bound


def test_envelope_lifetime_of_damped_rabi():
    t = np.linspace(0, 10, 20001)
    pop = np.exp(-t) * np.cos(5 * t) ** 2
    res = tp.lifetime(t, pop)
    # maxima sit just off exp(-t) (shifted by the damping), so tau is near 1
    assert abs(res.tau - 1.0) < 0.02
    assert res.n_maxima >= 2


def test_lifetime_lower_bound_flag():
    t = np.linspace(0, 1, 101)
    res = tp.lifetime(t, np.exp(-0.1 * t))
    assert res.lower_bound and res.tau == 1.0


def test_local_maxima():
    assert list(local_maxima(np.array([0, 1, 0, 2, 2, 1]))) == [1, 3]  # plateaus report their first sample


def test_bare_lifetime_oracle(fig2):
    tau0 = tp.bare_lifetime(fig2).tau
    assert abs(tau0 / (2 / (fig2.kappa + fig2.gamma0)) - 1) < 0.1


def test_free_emitter_lifetime():
    p = tp.preset("fig2", g=0.0, n_atoms=0)
    assert abs(tp.qe_lifetime(tp.build_full_heff(p)).tau - 1.0) < 1e-3


def test_grid_extension():
    p = tp.preset("fig2", g=0.0, n_atoms=0, gamma0=0.05, unit="gamma0")
    h = tp.build_full_heff(p)
    res = tp.qe_lifetime(h, t_end=1.0)
    assert not res.lower_bound and abs(res.tau - 20.0) < 0.01
    assert tp.qe_lifetime(h, t_end=1.0, max_extensions=0).lower_bound


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_eigen_vs_ode(seed):
    p = random_params(np.random.default_rng(seed))
    h = tp.build_full_heff(p)
    t = np.linspace(0, 2.0 / p.time_unit_rate, 201)
    a = tp.propagate(h, tp.excite(h), t, method="eigen").amplitudes
    b = tp.propagate(h, tp.excite(h), t, method="ode").amplitudes
    assert np.max(np.abs(a - b)) < 1e-6


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_norm_never_grows(seed):
    p = random_params(np.random.default_rng(seed))
    h = tp.build_full_heff(p)
    ts = tp.propagate(h, tp.excite(h), np.linspace(0, 3, 301))
    assert np.all(np.diff(ts.total) <= 1e-10) and ts.total[0] == pytest.approx(1.0)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.2, 5))
def test_lifetime_ratio_unit_covariance(seed, c):
    p = random_params(np.random.default_rng(seed), n_max=5)
    r1 = tp.qe_lifetime(tp.build_full_heff(p)).tau / tp.bare_lifetime(p).tau
    q = p.scaled(c)
    r2 = tp.qe_lifetime(tp.build_full_heff(q)).tau / tp.bare_lifetime(q).tau
    assert r2 == pytest.approx(r1, rel=1e-6)


def test_populations_unit_covariance(fig2):
    c = 3.0
    t = np.linspace(0, 1, 101)
    h1 = tp.build_full_heff(fig2)
    h2 = tp.build_full_heff(fig2.scaled(c))
    a = tp.propagate(h1, tp.excite(h1), t).populations
    b = tp.propagate(h2, tp.excite(h2), t / c).populations
    assert np.max(np.abs(a - b)) < 1e-10


def test_rejects_bad_inputs(fig2):
    h = tp.build_full_heff(fig2.replace(n_atoms=2))
    with pytest.raises(ValueError):
        tp.propagate(h, 2 * tp.excite(h), [0, 1])
    with pytest.raises(ValueError):
        tp.propagate(h, tp.excite(h), [1, 0])


def test_sweep_shapes_and_parallel_agree(fig2):
    p = fig2.replace(n_atoms=7)
    a = tp.lifetime_enhancement_sweep(p, "J0", [0.0, 40.0])
    b = tp.lifetime_enhancement_sweep(p, "J0", [0.0, 40.0], jobs=2)
    assert np.array_equal(a.ratio, b.ratio)
    g = tp.lifetime_enhancement_sweep(p, "J0,N", [0.0, 40.0], [3, 5, 7])
    assert g.ratio.shape == (2, 3)
    with pytest.raises(ValueError):
        tp.lifetime_enhancement_sweep(p, "kappa", [1.0])
