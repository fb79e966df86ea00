import numpy as np
import pytest

from conftest import admissible_corpus, inadmissible_corpus
from slitwave.admissibility import (
    CONDITION_NAMES,
    SOLVABILITY_NAMES,
    Mismatch,
    check,
    combined_continuity_residual,
    cross_validate,
    residuals_fg,
)
from slitwave.dalembert import make_pair
from slitwave.initial_data import periodic_data, quadratic_data, zero_data


@pytest.mark.parametrize("label, cfg, data", admissible_corpus(), ids=lambda v: v if isinstance(v, str) else "")
def test_admissible_examples(label, cfg, data):
    rep = check(cfg, data)
    assert rep.admissible
    assert rep.max_abs_residual <= 1e-12
    assert cross_validate(cfg, data)


def test_zero_all_exact(cfg):
    rep = check(cfg, zero_data())
    assert all(v == 0 for _, _, v in rep.rows())


def test_report_shape(cfg):
    rep = check(cfg, zero_data())
    assert list(rep.residuals_phi_psi) == list(CONDITION_NAMES)
    assert list(rep.residuals_fg) == list(CONDITION_NAMES)
    assert list(rep.residuals_solvability) == list(SOLVABILITY_NAMES)
    assert len(list(rep.rows())) == 30
    assert "admissible = true" in rep.format()


def test_periodic_mismatch_vanishes():
    cfg, data = periodic_data()
    m = Mismatch(cfg, make_pair(data))
    tau = np.linspace(0, cfg.ell, 101)
    assert np.max(np.abs(m.u(tau))) < 1e-12
    assert np.max(np.abs(m.ux(tau))) < 1e-12


def test_quadratic_gamma62_residual(cfg):
    # phi(c2-ell) - phi(c1-ell) = 16 - 4, phi(d1) - phi(d2) = 1 - 25
    rep = check(cfg, quadratic_data())
    assert rep.residuals_phi_psi["continuity_gamma62"] == pytest.approx(36.0, abs=1e-9)
    assert not rep.admissible
    assert cross_validate(cfg, quadratic_data())


def test_fg_family_is_half_of_phi_psi_for_continuity(cfg):
    # each family keeps its own lhs - rhs orientation, so compare magnitudes
    rep = check(cfg, quadratic_data())
    for key in ("continuity_gamma62", "continuity_gamma64"):
        assert abs(rep.residuals_fg[key]) == pytest.approx(0.5 * abs(rep.residuals_phi_psi[key]), abs=1e-12)


def test_admissible_iff_max_below_tol(cfg):
    rep = check(cfg, quadratic_data(), tol=100.0)
    assert rep.admissible == (rep.max_abs_residual <= 100.0)
    assert rep.admissible


@pytest.mark.parametrize("label, cfg, data", inadmissible_corpus(), ids=lambda v: v if isinstance(v, str) else "")
def test_combined_condition_is_sum(label, cfg, data):
    pair = make_pair(data)
    fg = residuals_fg(cfg, pair)
    combined = combined_continuity_residual(cfg, pair)
    assert combined == pytest.approx(fg["continuity_gamma62"] + fg["continuity_gamma64"], abs=1e-12)


def test_corpus_verdicts_agree():
    corpus = admissible_corpus()[1:] + inadmissible_corpus()
    assert len(corpus) >= 20
    verdicts = {}
    for label, cfg, data in corpus:
        rep = check(cfg, data)
        fams = rep.family_verdicts()
        assert len(set(fams.values())) == 1, (label, fams)
        verdicts[label] = rep.admissible
    assert sum(verdicts.values()) == 3
    assert sum(not v for v in verdicts.values()) >= 17
