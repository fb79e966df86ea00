"""Existence conditions on the Cauchy data, in three equivalent formulations.

* ``phi_psi``: conditions written directly on ``phi`` and ``psi`` (integrals of
  ``psi`` by adaptive quadrature);
* ``fg``: the same conditions on the characteristic profiles ``f``, ``g``;
* ``solvability``: endpoint conditions on the slit mismatch functions
  ``m_u(t) = u^D(a2, b2 + t) - u^D(a1, b1 + t)`` and
  ``m_ux(t) = u^D_x(a2, b2 + t) - u^D_x(a1, b1 + t)``.

Residuals are signed ``lhs - rhs`` and absolute (not relative).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .dalembert import CharacteristicPair, make_pair
from .geometry import ValidatedConfig
from .initial_data import InitialData

DEFAULT_TOL = 1e-9

FAMILIES = ("phi_psi", "fg", "solvability")

CONDITION_NAMES = (
    "continuity_gamma62",
    "continuity_gamma64",
    "smooth_c[1]", "smooth_d[1]", "smooth_c-ell[1]", "smooth_d+ell[1]",
    "smooth_c[2]", "smooth_d[2]", "smooth_c-ell[2]", "smooth_d+ell[2]",
)

SOLVABILITY_NAMES = (
    "m_u'(0)", "m_u'(ell)", "m_u(0)+m_u(ell)", "m_u''(0)", "m_u''(ell)",
    "int m_ux", "m_ux(0)", "m_ux(ell)", "m_ux'(0)", "m_ux'(ell)",
)


def _quad(fn, lo, hi, tol):
    if lo == hi:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(lambda s: float(fn(s)), lo, hi, epsabs=tol, epsrel=1e-13, limit=400)
    return val


@dataclass(frozen=True)
class Mismatch:
    """Differences of the free field between the identified slit points."""

    cfg: ValidatedConfig
    pair: CharacteristicPair

    def _diff(self, fn_f, fn_g, sf, sg, t):
        """``sf * F(eta) + sg * G(xi)`` at slit 2 minus the same at slit 1."""
        t = np.asarray(t, dtype=float)
        c = self.cfg
        return (sf * fn_f(c.c2 - t) + sg * fn_g(c.d2 + t)) - (sf * fn_f(c.c1 - t) + sg * fn_g(c.d1 + t))

    def u(self, t):
        p = self.pair
        return self._diff(p.f, p.g, 1.0, 1.0, t)

    def du(self, t):
        p = self.pair
        return self._diff(p.df, p.dg, -1.0, 1.0, t)

    def d2u(self, t):
        p = self.pair
        return self._diff(p.d2f, p.d2g, 1.0, 1.0, t)

    def ux(self, t):
        p = self.pair
        return self._diff(p.df, p.dg, 1.0, 1.0, t)

    def dux(self, t):
        p = self.pair
        return self._diff(p.d2f, p.d2g, -1.0, 1.0, t)


@dataclass(frozen=True)
class AdmissibilityReport:
    residuals_phi_psi: dict[str, float]
    residuals_fg: dict[str, float]
    residuals_solvability: dict[str, float]
    tol: float

    def family(self, name: str) -> dict[str, float]:
        return getattr(self, f"residuals_{name}")

    def family_max(self, name: str) -> float:
        return max(abs(v) for v in self.family(name).values())

    def family_verdicts(self) -> dict[str, bool]:
        return {name: self.family_max(name) <= self.tol for name in FAMILIES}

    @property
    def max_abs_residual(self) -> float:
        return max(self.family_max(name) for name in FAMILIES)

    @property
    def admissible(self) -> bool:
        return self.max_abs_residual <= self.tol

    def rows(self):
        for fam in FAMILIES:
            for key, val in self.family(fam).items():
                yield fam, key, val

    def format(self) -> str:
        lines = [f"{fam}.{key} = {val:.17g}" for fam, key, val in self.rows()]
        lines.append(f"max_abs_residual = {self.max_abs_residual:.17g}")
        lines.append(f"tol = {self.tol:.17g}")
        lines.append(f"admissible = {str(self.admissible).lower()}")
        return "\n".join(lines)


def residuals_phi_psi(cfg: ValidatedConfig, data: InitialData, quad_tol: float = 1e-12) -> dict[str, float]:
    phi, psi = data.phi, data.psi
    c1, c2, d1, d2, ell = cfg.c1, cfg.c2, cfg.d1, cfg.d2, cfg.ell

    def P(s):
        return float(phi(np.float64(s)))

    def I(lo, hi):
        return _quad(psi, lo, hi, quad_tol)

    out = {
        "continuity_gamma62": (P(c2 - ell) - P(c1 - ell) + I(c2 - ell, c1 - ell))
        - (P(d1) - P(d2) - I(d1, d2)),
        "continuity_gamma64": (P(d2 + ell) - P(d1 + ell) + I(d1 + ell, d2 + ell))
        - (P(c1) - P(c2) - I(c2, c1)),
    }
    derivs = {1: (data.dphi, data.psi), 2: (data.d2phi, data.dpsi)}
    for i in (1, 2):
        dp, dq = derivs[i]

        def minus(s):
            return float(dp(np.float64(s)) - dq(np.float64(s)))

        def plus(s):
            return float(dp(np.float64(s)) + dq(np.float64(s)))

        out[f"smooth_c[{i}]"] = minus(c1) - minus(c2)
        out[f"smooth_d[{i}]"] = plus(d1) - plus(d2)
        out[f"smooth_c-ell[{i}]"] = minus(c1 - ell) - minus(c2 - ell)
        out[f"smooth_d+ell[{i}]"] = plus(d1 + ell) - plus(d2 + ell)
    return {k: out[k] for k in CONDITION_NAMES}


def residuals_fg(cfg: ValidatedConfig, pair: CharacteristicPair) -> dict[str, float]:
    c1, c2, d1, d2, ell = cfg.c1, cfg.c2, cfg.d1, cfg.d2, cfg.ell

    def ev(fn, s):
        return float(fn(np.float64(s)))

    f, g = pair.f, pair.g
    out = {
        "continuity_gamma62": (ev(f, c2 - ell) - ev(f, c1 - ell)) - (ev(g, d1) - ev(g, d2)),
        "continuity_gamma64": (ev(f, c1) - ev(f, c2)) - (ev(g, d2 + ell) - ev(g, d1 + ell)),
    }
    for i in (1, 2):
        fi, gi = pair.derivative("f", i), pair.derivative("g", i)
        out[f"smooth_c[{i}]"] = ev(fi, c1) - ev(fi, c2)
        out[f"smooth_d[{i}]"] = ev(gi, d1) - ev(gi, d2)
        out[f"smooth_c-ell[{i}]"] = ev(fi, c1 - ell) - ev(fi, c2 - ell)
        out[f"smooth_d+ell[{i}]"] = ev(gi, d1 + ell) - ev(gi, d2 + ell)
    return {k: out[k] for k in CONDITION_NAMES}


def combined_continuity_residual(cfg: ValidatedConfig, pair: CharacteristicPair) -> float:
    """Residual of the single condition obtained from continuity on Gamma16 and Gamma36."""
    c1, c2, d1, d2, ell = cfg.c1, cfg.c2, cfg.d1, cfg.d2, cfg.ell
    f = lambda s: float(pair.f(np.float64(s)))  # noqa: E731
    g = lambda s: float(pair.g(np.float64(s)))  # noqa: E731
    return (f(c2 - ell) - f(c1 - ell) + f(c1) - f(c2)) - (g(d2 + ell) - g(d1 + ell) + g(d1) - g(d2))


def residuals_solvability(cfg: ValidatedConfig, pair: CharacteristicPair,
                          tol: float = DEFAULT_TOL) -> dict[str, float]:
    m = Mismatch(cfg, pair)
    ell = cfg.ell

    def ev(fn, s):
        return float(fn(np.float64(s)))

    return {
        "m_u'(0)": ev(m.du, 0.0),
        "m_u'(ell)": ev(m.du, ell),
        "m_u(0)+m_u(ell)": ev(m.u, 0.0) + ev(m.u, ell),
        "m_u''(0)": ev(m.d2u, 0.0),
        "m_u''(ell)": ev(m.d2u, ell),
        "int m_ux": _quad(m.ux, 0.0, ell, tol / 10),
        "m_ux(0)": ev(m.ux, 0.0),
        "m_ux(ell)": ev(m.ux, ell),
        "m_ux'(0)": ev(m.dux, 0.0),
        "m_ux'(ell)": ev(m.dux, ell),
    }


def check(cfg: ValidatedConfig, data: InitialData, tol: float = DEFAULT_TOL) -> AdmissibilityReport:
    pair = make_pair(data)
    return AdmissibilityReport(
        residuals_phi_psi=residuals_phi_psi(cfg, data),
        residuals_fg=residuals_fg(cfg, pair),
        residuals_solvability=residuals_solvability(cfg, pair, tol),
        tol=tol,
    )


def cross_validate(cfg: ValidatedConfig, data: InitialData, tol: float = DEFAULT_TOL) -> bool:
    """True iff the three formulations give the same verdict."""
    verdicts = set(check(cfg, data, tol).family_verdicts().values())
    return len(verdicts) == 1
