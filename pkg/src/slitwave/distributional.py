"""Jump-function construction of the solution.

The field is the free d'Alembert wave plus two light-cone kernels sourced at
the lower slit endpoints::

    u(x, t) = u^D(x, t) + U(x - a1, t - b1) - U(x - a2, t - b2)
    U(x, t) = theta(t - |x|) * (Omega(t - |x|) - sign(x) * nu(t - |x|)) / 2

where ``nu`` and ``omega`` are the jumps of ``u`` and ``u_x`` across slit 2,
``Omega`` is the running integral of ``omega``, and both vanish outside
``[0, ell]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .admissibility import DEFAULT_TOL, Mismatch, check
from .classical import EvaluationError, InadmissibleData, owner_regions
from .dalembert import CharacteristicPair, make_pair, u_free, u_free_t, u_free_x
from .geometry import EPS_GEO, LEFT, RIGHT, SIDES, GeometryError, Region, ValidatedConfig, classify_array
from .initial_data import InitialData, Profile

QUAD_EPSABS = 1e-13


def _running_integral(fn, tau: np.ndarray) -> np.ndarray:
    """``int_0^tau fn`` for every entry of ``tau`` with one vectorised adaptive quadrature."""
    tau = np.asarray(tau, dtype=float)
    if tau.size == 0:
        return np.zeros(tau.shape)
    # grid sampling repeats the same light-cone argument many times
    flat, inverse = np.unique(tau.ravel(), return_inverse=True)
    val, _ = integrate.quad_vec(lambda s: flat * fn(flat * s), 0.0, 1.0,
                                epsabs=QUAD_EPSABS, epsrel=1e-12, norm="max")
    return np.asarray(val)[inverse.ravel()].reshape(tau.shape)


@dataclass(frozen=True)
class JumpData:
    """Slit jumps derived from the mismatch of the free field between identified points.

    ``extra_nu`` / ``extra_omega`` add an arbitrary window-supported profile to
    the corresponding jump; they are only used to exhibit non-uniqueness.
    """

    mismatch: Mismatch
    extra_nu: Profile | None = None
    extra_omega: Profile | None = None

    @property
    def ell(self) -> float:
        return self.mismatch.cfg.ell

    def _inside(self, tau):
        tau = np.asarray(tau, dtype=float)
        return tau, (tau >= 0) & (tau <= self.ell)

    def omega(self, tau):
        tau, inside = self._inside(tau)
        val = np.where(inside, self.mismatch.du(np.clip(tau, 0, self.ell)), 0.0)
        if self.extra_omega is not None:
            val = val + np.where(inside, self.extra_omega.value(tau), 0.0)
        return val

    def Omega(self, tau):
        """``int_0^tau omega`` in closed form: ``m_u(tau) - m_u(0)``, frozen past ``ell``."""
        tau = np.asarray(tau, dtype=float)
        m = self.mismatch
        tc = np.clip(tau, 0, self.ell)
        val = np.where(tau > 0, m.u(tc) - m.u(np.zeros_like(tc)), 0.0)
        if self.extra_omega is not None:
            val = val + np.where(tau > 0, _running_integral(self._extra_omega_win, tc), 0.0)
        return val

    def _extra_omega_win(self, s):
        return self.extra_omega.value(s)

    def Omega_quadrature(self, tau):
        """Cross-check of :meth:`Omega` by quadrature of :meth:`omega`."""
        tau = np.asarray(tau, dtype=float)
        tc = np.clip(tau, 0, self.ell)
        return np.where(tau > 0, _running_integral(self.omega, tc), 0.0)

    def nu(self, tau):
        tau, inside = self._inside(tau)
        val = np.zeros(tau.shape)
        if np.any(inside):
            val[inside] = _running_integral(self.mismatch.ux, tau[inside])
        if self.extra_nu is not None:
            val = val + np.where(inside, self.extra_nu.value(tau), 0.0)
        return val

    def dnu(self, tau):
        tau, inside = self._inside(tau)
        val = np.where(inside, self.mismatch.ux(np.clip(tau, 0, self.ell)), 0.0)
        if self.extra_nu is not None:
            val = val + np.where(inside, self.extra_nu.d1(tau), 0.0)
        return val

    def sample(self, taus):
        taus = np.asarray(taus, dtype=float)
        return taus, self.omega(taus), self.nu(taus)


def compute_jumps(cfg: ValidatedConfig, pair: CharacteristicPair) -> JumpData:
    return JumpData(Mismatch(cfg, pair))


# --- kernel ---------------------------------------------------------------


def _kernel(jumps: JumpData, x, t, which: str = "u", sign=None):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    x, t = np.broadcast_arrays(x, t)
    s = t - np.abs(x)
    sg = np.sign(x) if sign is None else np.full(x.shape, float(sign))
    out = np.zeros(x.shape)
    live = s > 0
    if not np.any(live):
        return out
    sl, gl = s[live], sg[live]
    if which == "u":
        out[live] = 0.5 * jumps.Omega(sl) - 0.5 * gl * jumps.nu(sl)
    elif which == "ux":
        out[live] = -0.5 * gl * jumps.omega(sl) + 0.5 * jumps.dnu(sl)
    elif which == "ut":
        out[live] = 0.5 * jumps.omega(sl) - 0.5 * gl * jumps.dnu(sl)
    else:
        raise ValueError(f"unknown quantity {which!r}")
    return out


def kernel_U(jumps: JumpData, x, t):
    """Light-cone kernel at ``x != 0``; the line ``x = 0`` needs :func:`kernel_U_sided`."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any((x == 0) & (t > 0)):
        raise EvaluationError("kernel is two-valued on x = 0; use kernel_U_sided")
    out = _kernel(jumps, x, t)
    return out if out.ndim else float(out)


def kernel_U_sided(jumps: JumpData, side: str, t, which: str = "u"):
    """Limit of the kernel as ``x -> +0`` (``side='right'``) or ``x -> -0``."""
    if side not in SIDES:
        raise GeometryError(f"side must be 'left' or 'right', got {side!r}", "side")
    sign = 1.0 if side == RIGHT else -1.0
    out = _kernel(jumps, np.zeros_like(np.asarray(t, dtype=float)), t, which, sign=sign)
    return out if out.ndim else float(out)


# --- solution -------------------------------------------------------------


@dataclass(frozen=True)
class StrengthenedSolution:
    cfg: ValidatedConfig
    pair: CharacteristicPair
    jumps: JumpData

    def evaluate(self, x, t, which: str = "u", strict: bool = True, eps: float = EPS_GEO):
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        codes = classify_array(self.cfg, x, t, eps)
        ok = owner_regions(codes) > 0
        if strict and not np.all(ok):
            bad = Region.from_code(codes[~ok].flat[0])
            raise EvaluationError(f"field is not single-valued on {bad}; use eval_sided for slit edges")
        cfg, p = self.cfg, self.pair
        free = {"u": u_free, "ux": u_free_x, "ut": u_free_t}[which]
        # sign 0 on x = a_i is safe off the slits: nu vanishes outside the window there
        val = (free(p, x, t)
               + _kernel(self.jumps, x - cfg.a1, t - cfg.b1, which)
               - _kernel(self.jumps, x - cfg.a2, t - cfg.b2, which))
        out = np.where(ok, val, np.nan)
        return out if out.ndim else float(out)

    def eval(self, x, t):
        return self.evaluate(x, t, "u")

    def eval_x(self, x, t):
        return self.evaluate(x, t, "ux")

    def eval_t(self, x, t):
        return self.evaluate(x, t, "ut")

    def eval_sided(self, slit: int, side: str, t):
        """One-sided limits ``(u, u_x, u_t)`` on a slit edge at absolute time ``t``."""
        if side not in SIDES:
            raise GeometryError(f"side must be 'left' or 'right', got {side!r}", "side")
        cfg = self.cfg
        lo, hi = cfg.window(slit)
        t = np.asarray(t, dtype=float)
        if np.any((t < lo - EPS_GEO) | (t > hi + EPS_GEO)):
            raise GeometryError(f"t outside the closed window [{lo}, {hi}] of slit {slit}", "window")
        x = np.full(t.shape, cfg.slit_x(slit))
        out = []
        for which in ("u", "ux", "ut"):
            free = {"u": u_free, "ux": u_free_x, "ut": u_free_t}[which](self.pair, x, t)
            if slit == 1:
                k1 = kernel_U_sided(self.jumps, side, t - cfg.b1, which)
                k2 = _kernel(self.jumps, x - cfg.a2, t - cfg.b2, which)
            else:
                k1 = _kernel(self.jumps, x - cfg.a1, t - cfg.b1, which)
                k2 = kernel_U_sided(self.jumps, side, t - cfg.b2, which)
            out.append(free + k1 - k2)
        if t.ndim == 0:
            return tuple(float(v) for v in out)
        return tuple(out)


def strengthened_solution(cfg: ValidatedConfig, data: InitialData, tol: float = DEFAULT_TOL,
                          force: bool = False) -> StrengthenedSolution:
    if not force:
        report = check(cfg, data, tol)
        if not report.admissible:
            raise InadmissibleData(report)
    pair = make_pair(data)
    return StrengthenedSolution(cfg, pair, compute_jumps(cfg, pair))


def eval_strengthened(cfg: ValidatedConfig, data: InitialData, x, t, tol: float = DEFAULT_TOL):
    return strengthened_solution(cfg, data, tol).eval(x, t)


def nonuniqueness_demo(cfg: ValidatedConfig, data: InitialData, free_jump: Profile,
                       jump: str = "nu") -> StrengthenedSolution:
    """Solution formula with an arbitrary window-supported profile added to one jump.

    Adding it to ``nu`` (the jump of ``u``) keeps both value-gluing conditions
    and breaks derivative gluing.  Adding it to ``omega`` breaks value gluing.
    """
    pair = make_pair(data)
    base = Mismatch(cfg, pair)
    if jump == "nu":
        jumps = JumpData(base, extra_nu=free_jump)
    elif jump == "omega":
        jumps = JumpData(base, extra_omega=free_jump)
    else:
        raise ValueError("jump must be 'nu' or 'omega'")
    return StrengthenedSolution(cfg, pair, jumps)


def gluing_residuals(sol, n: int = 50) -> dict[str, float]:
    """Largest mismatch of ``u``, ``u_x``, ``u_t`` between identified slit edges.

    Works for any solution object with ``eval_sided``; sampled on the closed window.
    """
    cfg = sol.cfg
    tau = np.linspace(0.0, cfg.ell, n)
    res = {"u": 0.0, "ux": 0.0, "ut": 0.0}
    for side1, side2 in ((LEFT, RIGHT), (RIGHT, LEFT)):
        lower = sol.eval_sided(1, side1, cfg.b1 + tau)
        upper = sol.eval_sided(2, side2, cfg.b2 + tau)
        for key, lo, up in zip(("u", "ux", "ut"), lower, upper):
            res[key] = max(res[key], float(np.max(np.abs(np.asarray(lo) - np.asarray(up)))))
    return res
