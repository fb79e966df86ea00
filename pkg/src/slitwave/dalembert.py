"""Right/left-moving profiles ``f``, ``g`` and the free-space d'Alembert field."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .initial_data import Fn, InitialData


@dataclass(frozen=True)
class CharacteristicPair:
    """``u^D(x, t) = f(x - t) + g(x + t)`` with ``f = (phi - Psi)/2``, ``g = (phi + Psi)/2``."""

    data: InitialData

    def f(self, s):
        d = self.data
        return 0.5 * (d.phi(s) - d.Psi(s))

    def df(self, s):
        d = self.data
        return 0.5 * (d.dphi(s) - d.psi(s))

    def d2f(self, s):
        d = self.data
        return 0.5 * (d.d2phi(s) - d.dpsi(s))

    def g(self, s):
        d = self.data
        return 0.5 * (d.phi(s) + d.Psi(s))

    def dg(self, s):
        d = self.data
        return 0.5 * (d.dphi(s) + d.psi(s))

    def d2g(self, s):
        d = self.data
        return 0.5 * (d.d2phi(s) + d.dpsi(s))

    def derivative(self, which: str, order: int) -> Fn:
        return {("f", 0): self.f, ("f", 1): self.df, ("f", 2): self.d2f,
                ("g", 0): self.g, ("g", 1): self.dg, ("g", 2): self.d2g}[(which, order)]


def make_pair(data: InitialData) -> CharacteristicPair:
    return CharacteristicPair(data)


def _args(x, t):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return x - t, x + t


def u_free(pair: CharacteristicPair, x, t):
    eta, xi = _args(x, t)
    return pair.f(eta) + pair.g(xi)


def u_free_x(pair: CharacteristicPair, x, t):
    eta, xi = _args(x, t)
    return pair.df(eta) + pair.dg(xi)


def u_free_t(pair: CharacteristicPair, x, t):
    eta, xi = _args(x, t)
    return -pair.df(eta) + pair.dg(xi)


def u_free_xx(pair: CharacteristicPair, x, t):
    eta, xi = _args(x, t)
    return pair.d2f(eta) + pair.d2g(xi)


def u_free_xt(pair: CharacteristicPair, x, t):
    eta, xi = _args(x, t)
    return -pair.d2f(eta) + pair.d2g(xi)
