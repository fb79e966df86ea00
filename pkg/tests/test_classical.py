import math

import numpy as np
import pytest

from conftest import admissible_corpus
from slitwave.classical import EvaluationError, InadmissibleData, solve
from slitwave.distributional import gluing_residuals
from slitwave.fd_oracle import off_boundary_mask
from slitwave.geometry import GAMMAS, LEFT, RIGHT, GeometryError, canonical_config, gamma_lines
from slitwave.initial_data import bump_data, periodic_data, pulse_data, quadratic_data, zero_data

CORPUS = admissible_corpus()
IDS = [label for label, _, _ in CORPUS]


def test_zero_constants(cfg):
    sol = solve(cfg, zero_data())
    assert all(v == 0 for v in sol.constants.values())


def test_bump_constants_vanish(cfg):
    sol = solve(cfg, bump_data(cfg))
    assert all(v == 0 for v in sol.constants.values())


def test_constant_relations():
    cfg, data = pulse_data()
    sol = solve(cfg, data)
    C = sol.constants
    assert C[7] == 0.0 and C[5] == 0.0
    assert C[6] == C[1] + C[2]
    assert C[1] == C[4] and C[2] == C[3]


def test_inadmissible_refused(cfg):
    with pytest.raises(InadmissibleData) as exc:
        solve(cfg, quadratic_data())
    assert exc.value.report.residuals_phi_psi["continuity_gamma62"] == pytest.approx(36.0)
    forced = solve(cfg, quadratic_data(), force=True)
    assert forced.forced and not forced.classical


@pytest.mark.parametrize("x, t, expected", [
    (0.5, 0.5, 0.0),
    (0.5, 2.0, 0.0),
    (1.5, 5.0, math.exp(-1)),
])
def test_bump_field_examples(cfg, x, t, expected):
    sol = solve(cfg, bump_data(cfg))
    assert sol.eval(x, t) == pytest.approx(expected, abs=1e-15)


def test_bump_slit1_left_limit(cfg):
    data = bump_data(cfg)
    u, ux, ut = solve(cfg, data).eval_sided(1, LEFT, 1.5)
    assert u == pytest.approx(float(data.phi(-1.5)), abs=1e-15)
    assert u > 0


def test_periodic_matches_closed_form():
    cfg, data = periodic_data()
    sol = solve(cfg, data)
    rng = np.random.default_rng(7)
    x, t = rng.uniform(-4, 8, 100), rng.uniform(0, 14, 100)
    assert np.max(np.abs(sol.eval(x, t) - (np.sin(x - t) + np.cos(x + t)))) < 1e-12


def test_zero_sided_limits(cfg):
    sol = solve(cfg, zero_data())
    for slit in (1, 2):
        for side in (LEFT, RIGHT):
            assert sol.eval_sided(slit, side, cfg.slit_t0(slit) + 0.3) == (0.0, 0.0, 0.0)


def test_sided_outside_window(cfg):
    with pytest.raises(GeometryError):
        solve(cfg, zero_data()).eval_sided(1, LEFT, 2.5)


def test_strict_evaluation_refuses_slits_and_endpoints(cfg):
    sol = solve(cfg, bump_data(cfg))
    for x, t in [(0.0, 1.5), (1.0, 4.5), (0.0, 1.0), (1.0, 5.0)]:
        with pytest.raises(EvaluationError):
            sol.eval(x, t)
    vals = sol.evaluate(np.array([0.0, 0.5]), np.array([1.5, 0.5]), strict=False)
    assert np.isnan(vals[0]) and vals[1] == 0.0


def _line_points(cfg, pair, n=50, seed=0):
    var, level, ai, direction = gamma_lines(cfg)[pair]
    s = np.random.default_rng(seed).uniform(0.05, 6.0, n)
    x = ai + direction * s
    t = x - level if var == "eta" else level - x
    keep = t > 0.01
    return x[keep], t[keep]


@pytest.mark.parametrize("label, cfg, data", CORPUS, ids=IDS)
@pytest.mark.parametrize("pair", GAMMAS)
def test_continuity_across_half_lines(label, cfg, data, pair):
    sol = solve(cfg, data)
    x, t = _line_points(cfg, pair)
    lo, hi = pair
    diff = np.abs(sol.region_form(lo, x, t) - sol.region_form(hi, x, t))
    assert np.max(diff) <= 1e-10


@pytest.mark.parametrize("label, cfg, data", CORPUS, ids=IDS)
@pytest.mark.parametrize("pair", GAMMAS)
def test_smoothness_across_half_lines(label, cfg, data, pair):
    """One-sided x-derivatives (orders 1 and 2) from each side of the line agree."""
    sol = solve(cfg, data)
    x, t = _line_points(cfg, pair, n=20, seed=1)
    h = 1e-4

    def u(k):
        return sol.evaluate(x + k * h, t)

    u0 = sol.evaluate(x, t)
    right1 = (-3 * u0 + 4 * u(1) - u(2)) / (2 * h)
    left1 = (3 * u0 - 4 * u(-1) + u(-2)) / (2 * h)
    right2 = (2 * u0 - 5 * u(1) + 4 * u(2) - u(3)) / h**2
    left2 = (2 * u0 - 5 * u(-1) + 4 * u(-2) - u(-3)) / h**2
    scale = max(1.0, float(np.max(np.abs(u0))))
    assert np.max(np.abs(right1 - left1)) <= 1e-6 * scale
    # the second-difference stencil amplifies argument rounding (~eps * (|x| + |t|)) by ~12 / h^2
    floor = 16 * np.finfo(float).eps * (1 + np.max(np.abs(x) + np.abs(t))) / h**2
    assert np.max(np.abs(right2 - left2)) <= 1e-6 * scale + floor
    lo, hi = pair
    assert np.max(np.abs(sol.region_form(lo, x, t, "uxx") - sol.region_form(hi, x, t, "uxx"))) <= 1e-10


def test_forced_quadratic_is_discontinuous(cfg):
    """With U6 = U1 + U2 the two continuity conditions surface as constant jumps
    across the half-lines leaving the upper endpoints of both slits."""
    sol = solve(cfg, quadratic_data(), force=True)
    fg = sol.report.residuals_fg
    expected = {(1, 6): fg["continuity_gamma62"], (2, 7): fg["continuity_gamma62"],
                (3, 6): fg["continuity_gamma64"], (4, 7): fg["continuity_gamma64"],
                (5, 1): 0.0, (5, 3): 0.0, (6, 2): 0.0, (6, 4): 0.0}
    assert abs(fg["continuity_gamma62"]) == pytest.approx(18.0)
    for pair, jump in expected.items():
        x, t = _line_points(cfg, pair)
        diff = np.abs(sol.region_form(pair[0], x, t) - sol.region_form(pair[1], x, t))
        assert np.max(np.abs(diff - abs(jump))) < 1e-9, pair


@pytest.mark.parametrize("label, cfg, data", CORPUS, ids=IDS)
def test_initial_conditions(label, cfg, data):
    sol = solve(cfg, data)
    x = np.random.default_rng(8).uniform(-6, 8, 100)
    assert np.max(np.abs(sol.eval(x, 0.0) - data.phi(x))) <= 1e-12
    assert np.max(np.abs(sol.eval_t(x, 0.0) - data.psi(x))) <= 1e-12


@pytest.mark.parametrize("label, cfg, data", CORPUS, ids=IDS)
def test_gluing_including_time_derivative(label, cfg, data):
    res = gluing_residuals(solve(cfg, data), n=50)
    assert res["u"] <= 1e-12
    assert res["ux"] <= 1e-10
    assert res["ut"] <= 1e-10


@pytest.mark.parametrize("label, cfg, data", CORPUS, ids=IDS)
def test_jump_antisymmetry_and_support(label, cfg, data):
    j = solve(cfg, data).jumps()
    tau = np.linspace(0, cfg.ell, 41)
    assert np.max(np.abs(j.lower_nu(tau) + j.nu(tau))) <= 1e-10
    assert np.max(np.abs(j.lower_omega(tau) + j.omega(tau))) <= 1e-10
    outside = np.array([-0.3, -1e-3, cfg.ell + 1e-3, cfg.ell + 0.3])
    assert np.all(j.nu(outside) == 0) and np.all(j.omega(outside) == 0)


def test_example_jumps():
    for cfg, data in (periodic_data(), (canonical_config(), zero_data())):
        j = solve(cfg, data).jumps()
        tau = np.linspace(0, cfg.ell, 21)
        assert np.max(np.abs(j.nu(tau))) <= 1e-12
        assert np.max(np.abs(j.omega(tau))) <= 1e-12
    cfg, data = pulse_data()
    j = solve(cfg, data).jumps()
    assert abs(j.nu(0.5)) > 0.1 and abs(j.omega(0.25)) > 0.1


@pytest.mark.parametrize("label, cfg, data", CORPUS, ids=IDS)
def test_interior_wave_residual(label, cfg, data):
    sol = solve(cfg, data)
    rng = np.random.default_rng(9)
    x, t = rng.uniform(-5, 7, 400), rng.uniform(0.1, 12, 400)
    h = 1e-3
    # keep stencils inside one open domain
    keep = off_boundary_mask(cfg, x, t, 3 * h)
    x, t = x[keep], t[keep]
    ev = sol.eval
    utt = (ev(x, t + h) - 2 * ev(x, t) + ev(x, t - h)) / h**2
    uxx = (ev(x + h, t) - 2 * ev(x, t) + ev(x - h, t)) / h**2
    assert np.max(np.abs(utt - uxx)) <= 1e-4
