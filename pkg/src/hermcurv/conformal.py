"""Conformal rescaling of ansatz profiles and the Yamabe-type functional.

For ``g~ = e^{2u} g`` with ``u = u(t)`` the rescaled metric is again of
ansatz form: ``h~ = e^u h`` and ``f~ = e^u f`` in the arclength ``t~`` with
``dt~ = e^u dt``.  All quantities here are for complex dimension ``n = 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import frame
from .errors import DomainError
from .frame import Jet, ProfilePair
from .numerics import Grid, SampledFunction, differentiate, invert_monotone

N_COMPLEX = 2
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class ConformalFactor:
    """The exponent ``u(t)`` of a conformal factor ``e^{2u}`` with its first two derivatives."""

    u: SampledFunction
    du: SampledFunction
    d2u: SampledFunction

    @classmethod
    def from_function(cls, fn, t) -> "ConformalFactor":
        """``fn(t, k)`` returns the ``k``-th derivative of ``u``."""
        grid = Grid(np.asarray(t, dtype=float))
        return cls(*(SampledFunction(grid, np.broadcast_to(fn(grid.nodes, k), grid.nodes.shape))
                     for k in range(3)))

    @classmethod
    def from_samples(cls, u: SampledFunction) -> "ConformalFactor":
        return cls(u, differentiate(u, 1), differentiate(u, 2))

    @classmethod
    def constant(cls, c: float, t) -> "ConformalFactor":
        return cls.from_function(lambda s, k: c if k == 0 else 0.0, t)

    @classmethod
    def linear(cls, eps: float, t) -> "ConformalFactor":
        return cls.from_function(lambda s, k: [eps * s, eps, 0.0][k], t)

    def __call__(self, t, order: int = 0):
        return (self.u, self.du, self.d2u)[order](t)


def _panel_integral(fn, nodes):
    """Cumulative integral of ``fn`` from ``nodes[0]`` to each node (8-point Gauss per panel)."""
    a, b = nodes[:-1], nodes[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    pieces = half * (fn(x.ravel()).reshape(x.shape) @ _GAUSS_WEIGHTS)
    return np.concatenate([[0.0], np.cumsum(pieces)])


def rescaled_arclength(p: ProfilePair, u: ConformalFactor) -> np.ndarray:
    """``t~`` at the nodes of ``p``: the integral of ``e^u``."""
    return _panel_integral(lambda s: np.exp(u(s)), p.t)


def rescaled_jet(j: Jet, u0, u1, u2) -> Jet:
    """Jet of ``(f~, h~)`` in ``t~`` from the jet of ``(f, h)`` in ``t``."""
    e = np.exp(u0)

    def lift(a, a1, a2):
        return e * a, a1 + u1 * a, (a2 + u2 * a + u1 * a1) / e

    f, f1, f2 = lift(j.f, j.f1, j.f2)
    h, h1, h2 = lift(j.h, j.h1, j.h2)
    return Jet(f=f, f1=f1, f2=f2, h=h, h1=h1, h2=h2)


def conformal_rescale_profile(p: ProfilePair, u: ConformalFactor, n: int | None = None) -> ProfilePair:
    """The profile of ``e^{2u} g`` on a uniform grid of its own arclength.

    The new grid is mapped back to ``t`` by inverting ``t~(t)``; ``f~`` and
    ``h~`` and their derivatives then follow from the chain rule.
    """
    if not np.allclose(u.u.nodes, p.t, rtol=0, atol=1e-14 * p.l):
        raise DomainError("the conformal factor must be sampled on the profile grid")
    tt = rescaled_arclength(p, u)
    back = invert_monotone(SampledFunction(p.f.grid, tt), n_out=n or p.t.size)
    t_new = back.nodes.copy()
    t_old = np.clip(back.values, p.t[0], p.t[-1])
    t_old[0], t_old[-1] = p.t[0], p.t[-1]
    j = Jet(*(s(t_old) for s in (p.f, p.f1, p.f2, p.h, p.h1, p.h2)))
    r = rescaled_jet(j, u(t_old), u(t_old, 1), u(t_old, 2))
    return ProfilePair.from_jets(t_new, r.f, r.f1, r.f2, r.h, r.h1, r.h2, m=p.m,
                                 t_original=t_old, arclength=tt)


def laplacian(p: ProfilePair, d1, d2, t):
    """Riemannian Laplacian ``-(h^2 f)^{-1} (h^2 f w')'`` of a function of ``t``."""
    j = p.jet(t)
    return -(d2 + d1 * (2 * j.h1 / j.h + j.f1 / j.f))


def gauduchon_conformal_covariance(p: ProfilePair, u: ConformalFactor, t,
                                   rescaled: ProfilePair | None = None):
    """Both sides of the conformal transformation rule of ``s^C + delta theta``.

    ``lhs`` is ``e^{2u}`` times the quantity of the rescaled profile, read off
    at the image of ``t``; ``rhs`` is ``(s^C + delta theta) + 4 Laplacian(u) - 4 u'^2``
    on the original profile.
    """
    n = N_COMPLEX
    t = np.asarray(t, dtype=float)
    q = conformal_rescale_profile(p, u) if rescaled is None else rescaled
    tt = q.meta.get("arclength")
    if tt is None:
        tt = rescaled_arclength(p, u)
    t_img = SampledFunction(p.f.grid, tt)(t)
    lhs = np.exp(2 * u(t)) * frame.gauduchon_combination(q, t_img)
    u1, u2 = u(t, 1), u(t, 2)
    rhs = (frame.gauduchon_combination(p, t) + 2 * n * laplacian(p, u1, u2, t)
           - n * (2 * n - 2) * u1 * u1)
    return lhs, rhs


def yamabe_residual(p: ProfilePair, phi: SampledFunction, lam: float, t):
    """``lam phi^3 - (s^C + delta theta) phi - 4 Laplacian(phi)`` at ``t``."""
    t = np.asarray(t, dtype=float)
    v = phi(t)
    if np.any(v <= 0):
        raise DomainError("phi must be positive")
    n = N_COMPLEX
    lap = laplacian(p, phi(t, 1), phi(t, 2), t)
    return (lam * v ** ((n + 1) / (n - 1)) - frame.gauduchon_combination(p, t) * v
            - 2 * n / (n - 1) * lap)


def _density_weighted_gauduchon(j: Jet):
    # (s^C + delta theta) h^2 f, finite where f -> 0
    f, f1, f2, h, h1, h2 = j
    return (-3 * h2 * f * h**2 - f2 * h**3 - h1**2 * f * h - 3 * h1 * f1 * h**2
            - 2 * h1 * f**2 + 2 * f1 * f * h + 4 * f * h) / h


def _quadrature_nodes(p: ProfilePair, panels: int = 128):
    edges = np.linspace(0.0, p.l, panels + 1)
    mid, half = 0.5 * (edges[:-1] + edges[1:]), 0.5 * np.diff(edges)
    x = (mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]).ravel()
    w = (half[:, None] * _GAUSS_WEIGHTS[None, :]).ravel()
    return x, w


def _profile_jet_anywhere(p: ProfilePair, t) -> Jet:
    return Jet(*(s(t) for s in (p.f, p.f1, p.f2, p.h, p.h1, p.h2)))


def volume(p: ProfilePair) -> float:
    """Total volume with the orbit-volume constant set to 1."""
    x, w = _quadrature_nodes(p)
    j = _profile_jet_anywhere(p, x)
    return float(np.sum(w * j.h**2 * j.f))


def functional_E(p: ProfilePair, phi: SampledFunction) -> float:
    """Yamabe-type quotient of the conformal factor ``phi`` (orbit volume set to 1).

    ``E = int(4 phi'^2 + (s^C + delta theta) phi^2) / (int phi^4)^(1/2)`` with
    volume density ``h^2 f dt``.
    """
    n = N_COMPLEX
    x, w = _quadrature_nodes(p)
    j = _profile_jet_anywhere(p, x)
    v, dv = phi(x), phi(x, 1)
    if np.any(v <= 0):
        raise DomainError("phi must be positive")
    dens = j.h**2 * j.f
    num = np.sum(w * (2 * n / (n - 1) * dv * dv * dens + _density_weighted_gauduchon(j) * v * v))
    den = np.sum(w * v ** (2 * n / (n - 1)) * dens)
    if not den > 0:
        raise DomainError("degenerate denominator")
    return float(num / den ** ((n - 1) / n))


def first_variation(p: ProfilePair, phi: SampledFunction, psi: SampledFunction,
                    eps: float = 1e-4) -> float:
    """Central difference of ``E(phi + eps psi)`` in ``eps``."""
    grid = phi.grid
    plus = SampledFunction(grid, phi.values + eps * psi.values)
    minus = SampledFunction(grid, phi.values - eps * psi.values)
    return (functional_E(p, plus) - functional_E(p, minus)) / (2 * eps)
