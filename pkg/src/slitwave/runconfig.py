"""Scenario files for the command line.

A scenario is an INI file with ``key = value`` sections::

    [slits]
    a1 = 0
    b1 = 1
    a2 = 1
    b2 = 4
    ell = 1

    [data]
    family = bump          # zero | quadratic | polynomial | trig | sinusoidal |
                           # bump | travelling | pulse
    # family parameters, e.g. for polynomial:  phi = 0, 0, 1   psi = 0
    # optional affine transform: scale, shift, amplitude; optional base point x0
    # numeric = true rebuilds the data from phi and psi alone (finite differences
    # and quadrature, tolerance quad_tol)

    [eval]                 # defaults for `eval` (optional)
    x = -4:6:101           # start:stop:count
    t = 0:8:81
    method = classical

    [fd]                   # defaults for `simulate` / `compare` (optional)
    h = 0.015625
    tmax = 8

    [check]
    tol = 1e-9

Numbers are plain decimal literals.  Builtin scenarios live in the package and
can be named instead of a path.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .admissibility import DEFAULT_TOL
from .geometry import GeometryError, SlitConfig, ValidatedConfig, validate
from .initial_data import (
    InitialData,
    bump_data,
    bump_profile,
    pulse_data,
    make_numeric,
    polynomial_data,
    quadratic_data,
    sinusoidal_data,
    travelling_data,
    trig_data,
    zero_data,
)

FAMILIES = ("zero", "quadratic", "polynomial", "trig", "sinusoidal", "bump", "travelling", "pulse")

_KNOWN_KEYS = {
    "slits": {"a1", "b1", "a2", "b2", "ell"},
    "data": {"family", "phi", "psi", "phi_terms", "psi_terms", "center", "width", "offset",
             "scale", "shift", "amplitude", "x0", "numeric", "quad_tol", "description"},
    "eval": {"x", "t", "method"},
    "fd": {"h", "xmin", "xmax", "tmax", "tol", "max_iter"},
    "check": {"tol"},
}


class ConfigError(ValueError):
    """Invalid scenario; the message names the section and key."""


@dataclass(frozen=True)
class RunConfig:
    name: str
    slits: ValidatedConfig
    data: InitialData
    tol: float
    sections: dict[str, dict[str, str]]

    def option(self, section: str, key: str, default=None):
        return self.sections.get(section, {}).get(key, default)

    def number(self, section: str, key: str, default=None) -> float | None:
        raw = self.option(section, key)
        if raw is None:
            return default
        return _float(raw, section, key)


def builtin_names() -> list[str]:
    root = resources.files("slitwave") / "scenarios"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ini"))


def builtin_text(name: str) -> str:
    path = resources.files("slitwave") / "scenarios" / f"{name}.ini"
    if not path.is_file():
        raise ConfigError(f"no builtin scenario {name!r} (available: {', '.join(builtin_names())})")
    return path.read_text()


def _float(raw: str, section: str, key: str) -> float:
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected a number, got {raw!r}") from None
    if not math.isfinite(val):
        raise ConfigError(f"[{section}] {key}: must be finite, got {raw!r}")
    return val


def _floats(raw: str, section: str, key: str) -> list[float]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"[{section}] {key}: expected a comma-separated list of numbers")
    return [_float(p, section, key) for p in parts]


def _terms(raw: str, section: str, key: str) -> list[tuple[float, float, float]]:
    """``A k p; A k p; ...`` for ``sum A sin(k x + p)``."""
    out = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        nums = chunk.split()
        if len(nums) != 3:
            raise ConfigError(f"[{section}] {key}: each term needs 'A k p', got {chunk!r}")
        out.append(tuple(_float(v, section, key) for v in nums))
    return out


def _bool(raw: str, section: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"[{section}] {key}: expected true/false, got {raw!r}")


def _build_data(d: dict[str, str], cfg: ValidatedConfig) -> InitialData:
    family = d.get("family")
    if family is None:
        raise ConfigError("[data] family: missing")
    if family not in FAMILIES:
        raise ConfigError(f"[data] family: unknown family {family!r} (one of {', '.join(FAMILIES)})")
    S = "data"
    x0 = _float(d["x0"], S, "x0") if "x0" in d else 0.0
    if family == "zero":
        data = zero_data()
    elif family == "quadratic":
        data = quadratic_data()
    elif family == "polynomial":
        if "phi" not in d:
            raise ConfigError("[data] phi: polynomial family needs phi coefficients")
        data = polynomial_data(_floats(d["phi"], S, "phi"), _floats(d.get("psi", "0"), S, "psi"), x0=x0)
    elif family == "trig":
        data = trig_data(_terms(d.get("phi_terms", ""), S, "phi_terms"),
                         _terms(d.get("psi_terms", ""), S, "psi_terms"), x0=x0)
    elif family == "sinusoidal":
        data = sinusoidal_data(x0)
    elif family == "bump":
        data = bump_data(cfg)
    elif family == "travelling":
        center = _float(d.get("center", "0.5"), S, "center")
        width = _float(d.get("width", "1"), S, "width")
        if width <= 0:
            raise ConfigError("[data] width: must be positive")
        data = travelling_data(bump_profile(center, width), _float(d.get("offset", "0"), S, "offset"))
    else:
        try:
            _, data = pulse_data(cfg=cfg)
        except ValueError as exc:
            raise ConfigError(f"[data] family: {exc}") from None

    if any(k in d for k in ("scale", "shift", "amplitude")):
        scale = _float(d.get("scale", "1"), S, "scale")
        if scale == 0:
            raise ConfigError("[data] scale: must be nonzero")
        data = data.transformed(scale, _float(d.get("shift", "0"), S, "shift"),
                                _float(d.get("amplitude", "1"), S, "amplitude"))
    if "x0" in d and family not in ("polynomial", "trig", "sinusoidal"):
        data = data.rebased(x0)
    if _bool(d.get("numeric", "false"), S, "numeric"):
        qt = _float(d.get("quad_tol", "1e-10"), S, "quad_tol")
        base = data
        data = make_numeric(lambda x: float(base.phi(x)), lambda x: float(base.psi(x)),
                            x0=data.x0, quad_tol=qt, name=f"{base.name}-numeric")
    return data


def parse(text: str, name: str = "<config>") -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        parser.read_string(text, source=name)
    except configparser.Error as exc:
        raise ConfigError(f"{name}: {exc}") from None
    sections = {s: dict(parser[s]) for s in parser.sections()}
    for s, keys in sections.items():
        if s not in _KNOWN_KEYS:
            raise ConfigError(f"{name}: unknown section [{s}]")
        extra = set(keys) - _KNOWN_KEYS[s]
        if extra:
            raise ConfigError(f"{name}: [{s}] unknown key(s) {', '.join(sorted(extra))}")
    if "slits" not in sections:
        raise ConfigError(f"{name}: missing [slits] section")
    sl = sections["slits"]
    vals = {}
    for key in ("a1", "b1", "a2", "b2", "ell"):
        if key not in sl:
            raise ConfigError(f"{name}: [slits] {key}: missing")
        try:
            vals[key] = _float(sl[key], "slits", key)
        except ConfigError as exc:
            raise ConfigError(f"{name}: {exc}") from None
    try:
        cfg = validate(SlitConfig(**vals))
    except GeometryError as exc:
        raise ConfigError(f"{name}: [slits] {exc}") from None
    if "data" not in sections:
        raise ConfigError(f"{name}: missing [data] section")
    try:
        data = _build_data(sections["data"], cfg)
    except ConfigError as exc:
        raise ConfigError(f"{name}: {exc}") from None
    try:
        tol = _float(sections.get("check", {}).get("tol", repr(DEFAULT_TOL)), "check", "tol")
    except ConfigError as exc:
        raise ConfigError(f"{name}: {exc}") from None
    return RunConfig(name=name, slits=cfg, data=data, tol=tol, sections=sections)


def load(spec: str) -> RunConfig:
    """Parse a scenario given as a file path or a builtin name."""
    path = Path(spec)
    if path.is_file():
        return parse(path.read_text(), str(path))
    if spec in builtin_names():
        return parse(builtin_text(spec), spec)
    raise ConfigError(f"{spec}: no such file or builtin scenario")
