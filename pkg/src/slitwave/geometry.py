"""Two-slit glued Minkowski half-plane: constants, regions and the gluing map.

The upper half-plane is cut along the vertical slits ``x = a1, b1 < t < b1 + ell``
and ``x = a2, b2 < t < b2 + ell``. The left edge of slit 1 is glued to the right
edge of slit 2 (and the right edge of slit 1 to the left edge of slit 2) with a
time shift ``b = b2 - b1``.  Characteristic half-lines leaving the four slit
endpoints split the half-plane into the seven open domains D1..D7.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

EPS_GEO = 1e-12

LEFT = "left"
RIGHT = "right"
SIDES = (LEFT, RIGHT)


class GeometryError(ValueError):
    """Invalid slit placement or a query outside the admissible geometry."""

    def __init__(self, message: str, code: str = "geometry"):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class SlitConfig:
    a1: float
    b1: float
    a2: float
    b2: float
    ell: float


@dataclass(frozen=True)
class ValidatedConfig:
    """Slit placement that satisfies the timelike-separation constraint.

    Derived constants follow ``a = a2 - a1``, ``b = b2 - b1``, ``c_i = a_i - b_i``,
    ``d_i = a_i + b_i`` and ``c = a - b``, ``d = a + b``.
    """

    a1: float
    b1: float
    a2: float
    b2: float
    ell: float
    a: float
    b: float
    c1: float
    c2: float
    d1: float
    d2: float
    c: float
    d: float

    @property
    def raw(self) -> SlitConfig:
        return SlitConfig(self.a1, self.b1, self.a2, self.b2, self.ell)

    def slit_x(self, slit: int) -> float:
        return _pick(slit, self.a1, self.a2)

    def slit_t0(self, slit: int) -> float:
        return _pick(slit, self.b1, self.b2)

    def window(self, slit: int) -> tuple[float, float]:
        t0 = self.slit_t0(slit)
        return t0, t0 + self.ell

    def conical_points(self) -> list[tuple[float, float]]:
        """Slit endpoints, numbered 1..4: slit-1 bottom/top, slit-2 bottom/top."""
        return [
            (self.a1, self.b1),
            (self.a1, self.b1 + self.ell),
            (self.a2, self.b2),
            (self.a2, self.b2 + self.ell),
        ]


def _pick(slit: int, first, second):
    if slit == 1:
        return first
    if slit == 2:
        return second
    raise GeometryError(f"slit must be 1 or 2, got {slit!r}", "slit")


def validate(config: SlitConfig) -> ValidatedConfig:
    """Check the slit placement and attach the derived constants."""
    a1, b1, a2, b2, ell = (float(v) for v in (config.a1, config.b1, config.a2, config.b2, config.ell))
    for name, v in zip(("a1", "b1", "a2", "b2", "ell"), (a1, b1, a2, b2, ell)):
        if not math.isfinite(v):
            raise GeometryError(f"{name} must be finite, got {v!r}", "finite")
    if ell <= 0:
        raise GeometryError(f"slit length must be positive, got ell={ell}", "ell")
    if b1 <= 0:
        raise GeometryError(f"slits must lie in the open upper half-plane, got b1={b1}", "b1")
    if a2 <= a1:
        raise GeometryError(f"need a2 > a1, got a1={a1}, a2={a2}", "order")
    if not b2 > b1 + ell + (a2 - a1):
        raise GeometryError(
            f"identification is not timelike: need b2 > b1 + ell + a2 - a1 = {b1 + ell + a2 - a1}, got b2={b2}",
            "timelike",
        )
    a, b = a2 - a1, b2 - b1
    return ValidatedConfig(
        a1=a1, b1=b1, a2=a2, b2=b2, ell=ell,
        a=a, b=b,
        c1=a1 - b1, c2=a2 - b2,
        d1=a1 + b1, d2=a2 + b2,
        c=a - b, d=a + b,
    )


def canonical_config() -> ValidatedConfig:
    return validate(SlitConfig(a1=0.0, b1=1.0, a2=1.0, b2=4.0, ell=1.0))


# --- characteristic coordinates -------------------------------------------


class CharCoords(NamedTuple):
    xi: float
    eta: float


def to_characteristic(x, t) -> CharCoords:
    return CharCoords(x + t, x - t)


def from_characteristic(cc: CharCoords):
    xi, eta = cc
    return (xi + eta) / 2, (xi - eta) / 2


# --- regions --------------------------------------------------------------

# Characteristic half-lines: (i, j) -> (variable, offset attribute, slit, side of slit)
# "eta" lines run up-right from an endpoint, "xi" lines run up-left.
GAMMAS: tuple[tuple[int, int], ...] = ((5, 1), (5, 3), (1, 6), (3, 6), (6, 2), (6, 4), (2, 7), (4, 7))


def gamma_lines(cfg: ValidatedConfig) -> dict[tuple[int, int], tuple[str, float, float, int]]:
    """Map each half-line to ``(variable, level, a_i, direction)``.

    The half-line is ``variable == level`` restricted to ``direction * (x - a_i) > 0``.
    """
    ell = cfg.ell
    return {
        (5, 1): ("eta", cfg.c1, cfg.a1, +1),
        (5, 3): ("xi", cfg.d1, cfg.a1, -1),
        (1, 6): ("eta", cfg.c1 - ell, cfg.a1, +1),
        (3, 6): ("xi", cfg.d1 + ell, cfg.a1, -1),
        (6, 2): ("eta", cfg.c2, cfg.a2, +1),
        (6, 4): ("xi", cfg.d2, cfg.a2, -1),
        (2, 7): ("eta", cfg.c2 - ell, cfg.a2, +1),
        (4, 7): ("xi", cfg.d2 + ell, cfg.a2, -1),
    }


@dataclass(frozen=True)
class Region:
    """Tag of a point of the closed upper half-plane.

    ``kind`` is one of ``"D"``, ``"Gamma"``, ``"Slit"``, ``"Conical"``, ``"Initial"``.
    """

    kind: str
    index: int = 0
    pair: tuple[int, int] | None = None

    def __str__(self) -> str:
        if self.kind == "D":
            return f"D{self.index}"
        if self.kind == "Gamma":
            return f"Gamma{self.pair[0]}{self.pair[1]}"
        if self.kind == "Slit":
            return f"Slit{self.index}"
        if self.kind == "Conical":
            return f"Conical{self.index}"
        return "Initial"

    @property
    def code(self) -> int:
        if self.kind == "D":
            return self.index
        if self.kind == "Gamma":
            return 100 + GAMMAS.index(self.pair)
        if self.kind == "Slit":
            return 200 + self.index
        if self.kind == "Conical":
            return 300 + self.index
        return 0

    @property
    def is_open_domain(self) -> bool:
        return self.kind == "D"

    @property
    def evaluable(self) -> bool:
        """True where the field is single-valued (open domains, half-lines, t = 0)."""
        return self.kind in ("D", "Gamma", "Initial")

    @classmethod
    def from_code(cls, code: int) -> "Region":
        code = int(code)
        if 1 <= code <= 7:
            return cls("D", code)
        if 100 <= code < 100 + len(GAMMAS):
            return cls("Gamma", pair=GAMMAS[code - 100])
        if code in (201, 202):
            return cls("Slit", code - 200)
        if 301 <= code <= 304:
            return cls("Conical", code - 300)
        if code == 0:
            return cls("Initial")
        raise ValueError(f"unknown region code {code}")


def region_name(code: int) -> str:
    return str(Region.from_code(code))


def open_domain_masks(cfg: ValidatedConfig, x, t) -> np.ndarray:
    """Boolean array of shape ``(7,) + shape`` with the strict D1..D7 inequalities."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    eta = x - t
    xi = x + t
    ell = cfg.ell
    upper = t > 0
    m = np.empty((7,) + np.broadcast(x, t).shape, dtype=bool)
    m[0] = (x > cfg.a1) & (cfg.c1 - ell < eta) & (eta < cfg.c1)
    m[1] = (x > cfg.a2) & (cfg.c2 - ell < eta) & (eta < cfg.c2)
    m[2] = (x < cfg.a1) & (cfg.d1 < xi) & (xi < cfg.d1 + ell)
    m[3] = (x < cfg.a2) & (cfg.d2 < xi) & (xi < cfg.d2 + ell)
    r1 = np.abs(x - cfg.a1)
    r2 = np.abs(x - cfg.a2)
    m[4] = (0 < t) & (t < r1 + cfg.b1)
    m[5] = (r1 + cfg.b1 + ell < t) & (t < r2 + cfg.b2)
    m[6] = t > r2 + cfg.b2 + ell
    m &= upper
    return m


def classify_array(cfg: ValidatedConfig, x, t, eps: float = EPS_GEO) -> np.ndarray:
    """Vectorised :func:`classify`, returning integer region codes (see :class:`Region`)."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise GeometryError("classification is defined for t >= 0 only", "domain")
    codes = np.full(x.shape, -1, dtype=np.int64)
    free = np.ones(x.shape, dtype=bool)

    def claim(mask, code):
        nonlocal free
        mask = mask & free
        codes[mask] = code
        free &= ~mask

    claim(t <= eps, 0)
    for k, (px, pt) in enumerate(cfg.conical_points(), start=1):
        claim((np.abs(x - px) <= eps) & (np.abs(t - pt) <= eps), 300 + k)
    for slit in (1, 2):
        lo, hi = cfg.window(slit)
        claim((np.abs(x - cfg.slit_x(slit)) <= eps) & (t > lo) & (t < hi), 200 + slit)
    eta = x - t
    xi = x + t
    for k, (pair, (var, level, ai, direction)) in enumerate(gamma_lines(cfg).items()):
        val = eta if var == "eta" else xi
        claim((np.abs(val - level) <= eps) & (direction * (x - ai) > 0), 100 + k)
    masks = open_domain_masks(cfg, x, t)
    for i in range(7):
        claim(masks[i], i + 1)
    if np.any(free):
        bad = np.argwhere(free)[0]
        raise RuntimeError(f"point ({x[tuple(bad)]}, {t[tuple(bad)]}) matched no region")
    return codes


def classify(cfg: ValidatedConfig, x: float, t: float, eps: float = EPS_GEO) -> Region:
    return Region.from_code(classify_array(cfg, x, t, eps).item())


def glue_map(cfg: ValidatedConfig, slit: int, side: str, t: float) -> tuple[int, str, float]:
    """Partner of the edge point ``(slit, side, t)`` under the identification.

    Left of slit 1 is glued to right of slit 2 and vice versa, shifted by ``b``.
    """
    if side not in SIDES:
        raise GeometryError(f"side must be 'left' or 'right', got {side!r}", "side")
    lo, hi = cfg.window(slit)
    if not lo < t < hi:
        raise GeometryError(f"t={t} outside the open window ({lo}, {hi}) of slit {slit}", "window")
    other = LEFT if side == RIGHT else RIGHT
    if slit == 1:
        return 2, other, t + cfg.b
    return 1, other, t - cfg.b
