"""Piecewise closed-form classical solution by region dispatch.

In each domain ``D_i`` the solution is ``f(x - t + A_i) + g(x + t + B_i) + C_i``
with region shifts ``A_i, B_i`` built from ``c = a - b`` and ``d = a + b`` and
constants fixed by continuity across the characteristic half-lines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .admissibility import DEFAULT_TOL, AdmissibilityReport, check
from .dalembert import CharacteristicPair, make_pair
from .geometry import EPS_GEO, LEFT, RIGHT, SIDES, GeometryError, Region, ValidatedConfig, classify_array
from .initial_data import InitialData

# Region used to evaluate points on each half-line (larger neighbour index) and on t = 0.
_GAMMA_OWNER = {100 + k: max(pair) for k, pair in enumerate(
    ((5, 1), (5, 3), (1, 6), (3, 6), (6, 2), (6, 4), (2, 7), (4, 7)))}

# Domain on each side of each slit: (slit, side) -> region.
ADJACENT = {(1, LEFT): 3, (1, RIGHT): 1, (2, LEFT): 4, (2, RIGHT): 2}


class InadmissibleData(ValueError):
    def __init__(self, report: AdmissibilityReport):
        super().__init__(
            f"initial data violate the existence conditions (max residual {report.max_abs_residual:.3g} "
            f"> tol {report.tol:.3g})"
        )
        self.report = report


class EvaluationError(ValueError):
    pass


def owner_regions(codes: np.ndarray) -> np.ndarray:
    """Domain index 1..7 whose closed form evaluates each code; 0 where undefined."""
    codes = np.asarray(codes)
    out = np.zeros(codes.shape, dtype=np.int64)
    dom = (codes >= 1) & (codes <= 7)
    out[dom] = codes[dom]
    out[codes == 0] = 5
    for code, owner in _GAMMA_OWNER.items():
        out[codes == code] = owner
    return out


@dataclass(frozen=True)
class ClassicalSolution:
    cfg: ValidatedConfig
    pair: CharacteristicPair
    constants: dict[int, float]
    shifts: dict[int, tuple[float, float]]
    report: AdmissibilityReport
    forced: bool = False

    @property
    def classical(self) -> bool:
        """False when the closed forms were evaluated for data that fail the conditions."""
        return self.report.admissible

    def region_form(self, region: int, x, t, which: str = "u"):
        """Closed form of domain ``region`` (1..7) at ``(x, t)``, also valid on its closure."""
        A, B = self.shifts[region]
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        eta = x - t + A
        xi = x + t + B
        p = self.pair
        if which == "u":
            return p.f(eta) + p.g(xi) + self.constants[region]
        if which == "ux":
            return p.df(eta) + p.dg(xi)
        if which == "ut":
            return -p.df(eta) + p.dg(xi)
        if which == "uxx":
            return p.d2f(eta) + p.d2g(xi)
        raise ValueError(f"unknown quantity {which!r}")

    def evaluate(self, x, t, which: str = "u", strict: bool = True, eps: float = EPS_GEO):
        """Vectorised field evaluation.

        Points on a slit or at a slit endpoint raise when ``strict``; otherwise
        they come back as ``nan``.
        """
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        codes = classify_array(self.cfg, x, t, eps)
        owners = owner_regions(codes)
        if strict and np.any(owners == 0):
            bad = Region.from_code(codes[owners == 0].flat[0])
            raise EvaluationError(f"field is not single-valued on {bad}; use eval_sided for slit edges")
        out = np.full(x.shape, np.nan)
        for r in range(1, 8):
            m = owners == r
            if np.any(m):
                out[m] = self.region_form(r, x[m], t[m], which)
        return out if out.ndim else float(out)

    def eval(self, x, t):
        return self.evaluate(x, t, "u")

    def eval_x(self, x, t):
        return self.evaluate(x, t, "ux")

    def eval_t(self, x, t):
        return self.evaluate(x, t, "ut")

    def eval_sided(self, slit: int, side: str, t):
        """One-sided limits ``(u, u_x, u_t)`` on an edge of a slit at absolute time ``t``."""
        if side not in SIDES:
            raise GeometryError(f"side must be 'left' or 'right', got {side!r}", "side")
        lo, hi = self.cfg.window(slit)
        t = np.asarray(t, dtype=float)
        if np.any((t < lo - EPS_GEO) | (t > hi + EPS_GEO)):
            raise GeometryError(f"t outside the closed window [{lo}, {hi}] of slit {slit}", "window")
        r = ADJACENT[(slit, side)]
        x = self.cfg.slit_x(slit)
        vals = tuple(self.region_form(r, x, t, w) for w in ("u", "ux", "ut"))
        if t.ndim == 0:
            return tuple(float(v) for v in vals)
        return vals

    def jumps(self) -> "SlitJumps":
        return SlitJumps(self)


class SlitJumps:
    """Jumps ``[F]_{x=a_i}(b_i + tau) = F(a_i + 0) - F(a_i - 0)`` of the classical field.

    ``nu``/``omega`` are the jumps of ``u``/``u_x`` across slit 2; the ``lower_*``
    accessors give the same quantities across slit 1.
    """

    probe = 1e-9

    def __init__(self, sol: ClassicalSolution):
        self.sol = sol

    def jump(self, slit: int, tau, which: str = "u"):
        sol, cfg = self.sol, self.sol.cfg
        tau = np.asarray(tau, dtype=float)
        t = cfg.slit_t0(slit) + tau
        x = cfg.slit_x(slit)
        out = np.zeros(tau.shape)
        inside = (tau >= 0) & (tau <= cfg.ell)
        if np.any(inside):
            tin = t[inside]
            out[inside] = (sol.region_form(ADJACENT[(slit, RIGHT)], x, tin, which)
                           - sol.region_form(ADJACENT[(slit, LEFT)], x, tin, which))
        outside = ~inside & (t > 0)
        if np.any(outside):
            tout = t[outside]
            left = owner_regions(classify_array(cfg, np.full(tout.shape, x - self.probe), tout))
            right = owner_regions(classify_array(cfg, np.full(tout.shape, x + self.probe), tout))
            vals = np.zeros(tout.shape)
            for i, tt in enumerate(tout):
                if left[i] != right[i]:
                    vals[i] = (sol.region_form(int(right[i]), x, tt, which)
                               - sol.region_form(int(left[i]), x, tt, which))
            out[outside] = vals
        return out if out.ndim else float(out)

    def nu(self, tau):
        return self.jump(2, tau, "u")

    def omega(self, tau):
        return self.jump(2, tau, "ux")

    def lower_nu(self, tau):
        return self.jump(1, tau, "u")

    def lower_omega(self, tau):
        return self.jump(1, tau, "ux")

    def sample(self, taus):
        taus = np.asarray(taus, dtype=float)
        return taus, self.omega(taus), self.nu(taus)


def solve(cfg: ValidatedConfig, data: InitialData, tol: float = DEFAULT_TOL,
          force: bool = False) -> ClassicalSolution:
    """Closed-form classical solution; refuses inadmissible data unless ``force``."""
    report = check(cfg, data, tol)
    if not report.admissible and not force:
        raise InadmissibleData(report)
    pair = make_pair(data)
    f = lambda s: float(pair.f(np.float64(s)))  # noqa: E731
    g = lambda s: float(pair.g(np.float64(s)))  # noqa: E731
    U1 = f(cfg.c1) - f(cfg.c2)
    U2 = g(cfg.d1) - g(cfg.d2)
    constants = {1: U1, 2: U2, 3: U2, 4: U1, 5: 0.0, 6: U1 + U2, 7: 0.0}
    shifts = {1: (cfg.c, 0.0), 2: (-cfg.c, 0.0), 3: (0.0, cfg.d), 4: (0.0, -cfg.d),
              5: (0.0, 0.0), 6: (0.0, 0.0), 7: (0.0, 0.0)}
    return ClassicalSolution(cfg, pair, constants, shifts, report, forced=not report.admissible)
