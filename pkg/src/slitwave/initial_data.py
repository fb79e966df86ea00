"""Cauchy data ``u(x, 0) = phi``, ``u_t(x, 0) = psi`` and the builtin data families.

All callables are numpy-vectorised: they accept scalars or arrays and return
float arrays of the same shape.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .geometry import SlitConfig, ValidatedConfig, canonical_config, validate

Fn = Callable[[np.ndarray], np.ndarray]

FD_STEP = 1e-5
FD_STEP_2 = 1e-4
CHECK_RTOL = 1e-6


class InitialDataError(ValueError):
    pass


class QuadratureError(InitialDataError):
    pass


@dataclass(frozen=True)
class InitialData:
    """Cauchy pair with derivatives and ``Psi(x) = integral of psi from x0 to x``."""

    phi: Fn
    dphi: Fn
    d2phi: Fn
    psi: Fn
    dpsi: Fn
    Psi: Fn
    x0: float = 0.0
    name: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def rebased(self, x0: float) -> "InitialData":
        """Same data with the antiderivative anchored at a different base point."""
        Psi, c = self.Psi, float(self.Psi(np.float64(x0)))
        return replace(self, Psi=lambda x: Psi(x) - c, x0=float(x0))

    def transformed(self, scale: float = 1.0, shift: float = 0.0, amplitude: float = 1.0) -> "InitialData":
        """Data ``amplitude * (phi, psi)(scale * x + shift)``."""
        s, d, A = float(scale), float(shift), float(amplitude)
        if s == 0:
            raise InitialDataError("scale must be nonzero")
        me = self

        def arg(x):
            return s * np.asarray(x, dtype=float) + d

        return InitialData(
            phi=lambda x: A * me.phi(arg(x)),
            dphi=lambda x: A * s * me.dphi(arg(x)),
            d2phi=lambda x: A * s * s * me.d2phi(arg(x)),
            psi=lambda x: A * me.psi(arg(x)),
            dpsi=lambda x: A * s * me.dpsi(arg(x)),
            Psi=lambda x: (A / s) * me.Psi(arg(x)),
            x0=(me.x0 - d) / s,
            name=me.name,
            params={**me.params, "scale": s, "shift": d, "amplitude": A},
        )


def _as_float(fn: Fn) -> Fn:
    return lambda x: np.asarray(fn(np.asarray(x, dtype=float)), dtype=float) + 0.0 * np.asarray(x, dtype=float)


def _central(fn: Fn, x: np.ndarray, step: float) -> np.ndarray:
    h = step * np.maximum(1.0, np.abs(x))
    return (fn(x + h) - fn(x - h)) / (2 * h)


def _second(fn: Fn, x: np.ndarray, step: float) -> np.ndarray:
    h = step * np.maximum(1.0, np.abs(x))
    return (fn(x + h) - 2 * fn(x) + fn(x - h)) / (h * h)


def consistency_residuals(data: InitialData, xs) -> dict[str, float]:
    """Largest scaled mismatch between each analytic derivative and a finite difference."""
    xs = np.asarray(xs, dtype=float)
    pairs = {
        "dphi": (data.dphi, data.phi),
        "d2phi": (data.d2phi, data.dphi),
        "dpsi": (data.dpsi, data.psi),
        "psi": (data.psi, data.Psi),
    }
    out = {}
    for name, (deriv, base) in pairs.items():
        exact = deriv(xs)
        fd = _central(base, xs, FD_STEP)
        scale = np.maximum(1.0, np.maximum(np.abs(exact), np.abs(base(xs))))
        out[name] = float(np.max(np.abs(fd - exact) / scale))
    out["Psi(x0)"] = abs(float(data.Psi(np.float64(data.x0))))
    return out


def check_consistency(data: InitialData, xs=None, rtol: float = CHECK_RTOL) -> None:
    if xs is None:
        xs = data.x0 + np.linspace(-6.0, 6.0, 41) + 0.0123
    res = consistency_residuals(data, xs)
    bad = {k: v for k, v in res.items() if v > rtol}
    if bad:
        raise InitialDataError(f"inconsistent closed forms for {data.name!r}: {bad}")


def make_analytic(phi, dphi, d2phi, psi, dpsi, Psi, x0: float = 0.0, *, name="custom",
                  check_points=None, params=None) -> InitialData:
    """Wrap caller-supplied closed forms, spot-checking them by finite differences."""
    data = InitialData(
        phi=_as_float(phi), dphi=_as_float(dphi), d2phi=_as_float(d2phi),
        psi=_as_float(psi), dpsi=_as_float(dpsi), Psi=_as_float(Psi),
        x0=float(x0), name=name, params=dict(params or {}),
    )
    check_consistency(data, check_points)
    return data


def make_numeric(phi, psi, x0: float = 0.0, quad_tol: float = 1e-10, *, name="numeric") -> InitialData:
    """Data from ``phi`` and ``psi`` alone.

    Derivatives come from central differences, ``Psi`` from adaptive quadrature.
    ``phi`` and ``psi`` must accept scalar floats.
    """
    phi_v = np.vectorize(lambda x: float(phi(x)), otypes=[float])
    psi_v = np.vectorize(lambda x: float(psi(x)), otypes=[float])

    def antiderivative_scalar(x):
        if x == x0:
            return 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            res = integrate.quad(psi, x0, x, epsabs=quad_tol, epsrel=0.0, limit=200, full_output=1)
        val, err = res[0], res[1]
        if len(res) > 3 or err > quad_tol:
            raise QuadratureError(f"quadrature of psi on [{x0}, {x}] did not converge (err={err:.3g})")
        return val

    Psi_v = np.vectorize(antiderivative_scalar, otypes=[float])
    return InitialData(
        phi=phi_v,
        dphi=lambda x: _central(phi_v, np.asarray(x, dtype=float), FD_STEP),
        d2phi=lambda x: _second(phi_v, np.asarray(x, dtype=float), FD_STEP_2),
        psi=psi_v,
        dpsi=lambda x: _central(psi_v, np.asarray(x, dtype=float), FD_STEP),
        Psi=Psi_v,
        x0=float(x0),
        name=name,
        params={"quad_tol": quad_tol},
    )


# --- builtin families -----------------------------------------------------


def zero_data() -> InitialData:
    def z(x):
        return np.zeros_like(np.asarray(x, dtype=float))

    return InitialData(z, z, z, z, z, z, 0.0, "zero")


def polynomial_data(phi_coeffs: Sequence[float], psi_coeffs: Sequence[float] = (0.0,), x0: float = 0.0,
                    name: str = "polynomial") -> InitialData:
    """Polynomial data; coefficients in increasing degree."""
    P = np.polynomial.Polynomial(phi_coeffs)
    Q = np.polynomial.Polynomial(psi_coeffs)
    Qi = Q.integ(lbnd=x0)
    dP, d2P, dQ = P.deriv(), P.deriv(2), Q.deriv()

    def ev(p):
        return lambda x: p(np.asarray(x, dtype=float)) + 0.0 * np.asarray(x, dtype=float)

    return InitialData(ev(P), ev(dP), ev(d2P), ev(Q), ev(dQ), ev(Qi), float(x0), name,
                       {"phi": list(map(float, phi_coeffs)), "psi": list(map(float, psi_coeffs))})


def quadratic_data() -> InitialData:
    return polynomial_data([0.0, 0.0, 1.0], [0.0], name="quadratic")


Term = tuple[float, float, float]


def trig_data(phi_terms: Sequence[Term], psi_terms: Sequence[Term], x0: float = 0.0,
              name: str = "trig") -> InitialData:
    """Sums of ``A * sin(k x + p)`` for ``phi`` and ``psi``; every ``k`` must be nonzero."""
    phi_terms = [tuple(map(float, term)) for term in phi_terms]
    psi_terms = [tuple(map(float, term)) for term in psi_terms]
    if any(k == 0 for _, k, _ in psi_terms):
        raise InitialDataError("psi wavenumbers must be nonzero")

    def series(terms, order):
        def fn(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            for A, k, p in terms:
                out = out + A * k**order * np.sin(k * x + p + order * math.pi / 2)
            return out
        return fn

    def Psi(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for A, k, p in psi_terms:
            out = out - (A / k) * (np.cos(k * x + p) - math.cos(k * x0 + p))
        return out

    return InitialData(series(phi_terms, 0), series(phi_terms, 1), series(phi_terms, 2),
                       series(psi_terms, 0), series(psi_terms, 1), Psi, float(x0), name,
                       {"phi_terms": phi_terms, "psi_terms": psi_terms})


def sinusoidal_data(x0: float = 0.0) -> InitialData:
    """``phi = sin + cos``, ``psi = -cos - sin``: d'Alembert solution ``sin(x - t) + cos(x + t)``."""
    half_pi = math.pi / 2
    return trig_data([(1.0, 1.0, 0.0), (1.0, 1.0, half_pi)],
                     [(-1.0, 1.0, half_pi), (-1.0, 1.0, 0.0)], x0=x0, name="sinusoidal")


def bump(x, center: float, width: float):
    """Smooth bump ``exp(-w^2 / (w^2 - 4 (x - center)^2))`` on ``(center - w/2, center + w/2)``.

    Returns the value and its first two derivatives.
    """
    x = np.asarray(x, dtype=float)
    w2 = width * width
    s = x - center
    q = w2 - 4.0 * s * s
    inside = q > 0
    qs = np.where(inside, q, 1.0)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        val = np.where(inside, np.exp(-w2 / qs), 0.0)
        dq = -8.0 * s
        w1 = w2 * dq / qs**2
        w2nd = w2 * (-8.0 * qs - 2.0 * dq * dq) / qs**3
        live = inside & (val > 0)
        d1 = np.where(live, w1 * val, 0.0)
        d2 = np.where(live, (w2nd + w1 * w1) * val, 0.0)
    return val, d1, d2


@dataclass(frozen=True)
class Profile:
    """A smooth profile with two derivatives, used as the pulse shape of travelling data."""

    value: Fn
    d1: Fn
    d2: Fn
    support: tuple[float, float]


def bump_profile(center: float = 0.5, width: float = 1.0) -> Profile:
    return Profile(
        value=lambda x: bump(x, center, width)[0],
        d1=lambda x: bump(x, center, width)[1],
        d2=lambda x: bump(x, center, width)[2],
        support=(center - width / 2, center + width / 2),
    )


def travelling_data(profile: Profile, offset: float, name: str = "travelling") -> InitialData:
    """Right-moving pulse ``phi(x) = p(x + offset)``, ``psi = -phi'`` (so ``g`` vanishes).

    The antiderivative base point sits right of the support, which makes ``Psi = -phi``.
    """
    lo, hi = profile.support
    x0 = hi - offset + 1.0
    p = profile

    def sh(x):
        return np.asarray(x, dtype=float) + offset

    return InitialData(
        phi=lambda x: p.value(sh(x)),
        dphi=lambda x: p.d1(sh(x)),
        d2phi=lambda x: p.d2(sh(x)),
        psi=lambda x: -p.d1(sh(x)),
        dpsi=lambda x: -p.d2(sh(x)),
        Psi=lambda x: -p.value(sh(x)),
        x0=x0,
        name=name,
        params={"offset": offset, "support": (lo - offset, hi - offset)},
    )


def bump_data(cfg: ValidatedConfig) -> InitialData:
    """Right-moving bump supported on ``(c1 - ell, c1)``: it enters slit 1 and leaves slit 2."""
    center = cfg.c1 - cfg.ell / 2
    prof = bump_profile(center=center, width=cfg.ell)
    return travelling_data(prof, 0.0, name="bump")


def periodic_config() -> ValidatedConfig:
    return validate(SlitConfig(a1=0.0, b1=1.0, a2=math.pi, b2=1.0 + 3.0 * math.pi, ell=1.0))


def periodic_data() -> tuple[ValidatedConfig, InitialData]:
    """Periodic data on slits whose ``c_i`` and ``d_i`` agree modulo ``2 pi``."""
    return periodic_config(), sinusoidal_data()


def pulse_data(profile: Profile | None = None,
                   cfg: ValidatedConfig | None = None) -> tuple[ValidatedConfig, InitialData]:
    """Right-moving pulse ``h(x + alpha)``, ``alpha = b2 - a2 + 1``, that enters slit 2 and exits slit 1.

    ``profile`` must vanish outside ``[0, 1]``; the unit bump is the default.
    """
    cfg = cfg or canonical_config()
    if cfg.ell != 1.0:
        raise InitialDataError("this scenario needs ell = 1")
    profile = profile or bump_profile()
    alpha = cfg.b2 - cfg.a2 + 1.0
    data = travelling_data(profile, alpha, name="pulse")
    return cfg, replace(data, params={**data.params, "alpha": alpha})
