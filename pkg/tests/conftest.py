import numpy as np
import pytest

from slitwave.geometry import canonical_config
from slitwave.initial_data import (
    bump_data,
    periodic_data,
    pulse_data,
    polynomial_data,
    trig_data,
    zero_data,
)

# criterion number -> (passed, one-line summary); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, line = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {line}")


@pytest.fixture
def cfg():
    return canonical_config()


def admissible_corpus():
    """(label, config, data) for the admissible datasets used across modules."""
    cfg = canonical_config()
    c54, d54 = periodic_data()
    c55, d55 = pulse_data()
    return [
        ("zero", cfg, zero_data()),
        ("periodic", c54, d54),
        ("bump", cfg, bump_data(cfg)),
        ("pulse", c55, d55),
    ]


def inadmissible_corpus(n_trig=10, n_poly=9, seed=20261014):
    """Random smooth trig and polynomial data on the canonical slits (generically inadmissible)."""
    rng = np.random.default_rng(seed)
    cfg = canonical_config()
    out = []
    for i in range(n_trig):
        phi = [(rng.normal(), rng.uniform(0.3, 3.0), rng.uniform(0, 2 * np.pi)) for _ in range(rng.integers(1, 4))]
        psi = [(rng.normal(), rng.uniform(0.3, 3.0), rng.uniform(0, 2 * np.pi)) for _ in range(rng.integers(1, 3))]
        out.append((f"trig{i}", cfg, trig_data(phi, psi, x0=rng.uniform(-2, 2))))
    for i in range(n_poly):
        deg = int(rng.integers(1, 4))
        phi = rng.normal(size=deg + 1)
        psi = rng.normal(size=int(rng.integers(1, 3)))
        out.append((f"poly{i}", cfg, polynomial_data(phi, psi, x0=rng.uniform(-2, 2))))
    return out


def region_samples(cfg, per_region=200, seed=0):
    """``per_region`` uniform random points in each open domain D1..D7 (dict region -> (x, t))."""
    from slitwave.geometry import classify_array

    rng = np.random.default_rng(seed)
    n = 200 * per_region
    x = rng.uniform(cfg.a1 - 6, cfg.a2 + 6, n)
    t = rng.uniform(0, cfg.b2 + cfg.ell + 6, n)
    codes = classify_array(cfg, x, t)
    out = {}
    for r in range(1, 8):
        sel = np.flatnonzero(codes == r)[:per_region]
        if sel.size < per_region:
            raise RuntimeError(f"only {sel.size} samples in D{r}")
        out[r] = (x[sel], t[sel])
    return out
