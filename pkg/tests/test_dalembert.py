import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slitwave.dalembert import make_pair, u_free, u_free_t, u_free_x
from slitwave.geometry import canonical_config
from slitwave.initial_data import bump_data, polynomial_data, sinusoidal_data, trig_data, zero_data

DATASETS = {
    "sinusoidal": sinusoidal_data(),
    "cubic": polynomial_data([0.5, 1.0, -0.3, 0.1], [1.0, 0.2], x0=-1.0),
    "trig": trig_data([(1.0, 0.7, 0.1), (0.3, 2.1, 1.0)], [(0.8, 1.3, 0.4)], x0=0.9),
    "bump": bump_data(canonical_config()),
}

XS = np.random.default_rng(4).uniform(-5, 5, 100)


@pytest.mark.parametrize("name", list(DATASETS))
def test_pair_identities(name):
    d = DATASETS[name]
    p = make_pair(d)
    assert np.max(np.abs(p.f(XS) + p.g(XS) - d.phi(XS))) < 1e-14
    assert np.max(np.abs(p.g(XS) - p.f(XS) - d.Psi(XS))) < 1e-14
    assert np.max(np.abs(p.dg(XS) - p.df(XS) - d.psi(XS))) < 1e-14


@pytest.mark.parametrize("name", list(DATASETS))
def test_initial_conditions(name):
    d = DATASETS[name]
    p = make_pair(d)
    assert np.max(np.abs(u_free(p, XS, 0.0) - d.phi(XS))) < 1e-14
    assert np.max(np.abs(u_free_t(p, XS, 0.0) - d.psi(XS))) < 1e-14


@pytest.mark.parametrize("name", list(DATASETS))
def test_wave_equation_residual(name):
    p = make_pair(DATASETS[name])
    rng = np.random.default_rng(5)
    x, t = rng.uniform(-4, 4, 200), rng.uniform(0.1, 4, 200)
    h = 1e-3
    utt = (u_free(p, x, t + h) - 2 * u_free(p, x, t) + u_free(p, x, t - h)) / h**2
    uxx = (u_free(p, x + h, t) - 2 * u_free(p, x, t) + u_free(p, x - h, t)) / h**2
    assert np.max(np.abs(utt - uxx)) < 1e-4


def test_zero_data():
    p = make_pair(zero_data())
    assert np.all(p.f(XS) == 0) and np.all(p.g(XS) == 0)
    assert np.all(u_free(p, XS, XS) == 0)


def test_sinusoidal_closed_form():
    p = make_pair(sinusoidal_data())
    assert float(u_free(p, 0.0, 0.0)) == pytest.approx(1.0, abs=1e-15)
    rng = np.random.default_rng(6)
    x, t = rng.uniform(-5, 5, 100), rng.uniform(0, 5, 100)
    assert np.max(np.abs(u_free(p, x, t) - (np.sin(x - t) + np.cos(x + t)))) < 1e-12


def test_bump_pair():
    d = DATASETS["bump"]
    p = make_pair(d)
    assert np.max(np.abs(p.f(XS) - d.phi(XS))) < 1e-15
    assert np.max(np.abs(p.g(XS))) == 0


@given(st.floats(-3, 3))
def test_base_point_invariance(x0):
    a = make_pair(sinusoidal_data(0.0))
    b = make_pair(sinusoidal_data(x0))
    x, t = XS, np.abs(XS[::-1])
    for fn in (u_free, u_free_x, u_free_t):
        assert np.max(np.abs(fn(a, x, t) - fn(b, x, t))) < 1e-12
    # f and g shift by opposite constants
    shift_f = a.f(XS) - b.f(XS)
    shift_g = a.g(XS) - b.g(XS)
    assert np.ptp(shift_f) < 1e-12 and np.max(np.abs(shift_f + shift_g)) < 1e-12
