r"""Geometry of the U(2)-invariant metric

.. math::

    g = h(t)^2 (e^1 \otimes e^1 + e^2 \otimes e^2) + f(t)^2 e^3 \otimes e^3 + dt^2

with the complex structure :math:`J E_1 = E_2,\ J E_3 = E_4` in the orthonormal
frame :math:`E_1 = X/h,\ E_2 = Y/h,\ E_3 = V/f,\ E_4 = \partial_t`.

Two independent routes are provided.  The closed-form curvature expressions
(Chern scalar, third scalar, Riemannian scalar, the two Ricci forms and the
Gauduchon combination) are evaluated directly on the profile jets.  The
connection-level oracle rebuilds the Chern and Levi-Civita connections from the
frame brackets alone, differentiates their coefficients in ``t`` by complex
step, assembles the curvature tensors and takes traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, GridError
from .numerics import Grid, SampledFunction, differentiate, interpolate


class Jet(NamedTuple):
    """Values and first two derivatives of ``f`` and ``h`` at some points."""

    f: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    h: np.ndarray
    h1: np.ndarray
    h2: np.ndarray


@dataclass(frozen=True)
class ProfilePair:
    """Sampled profile functions ``f(t)``, ``h(t)`` on ``[0, l]``.

    Derivative samples are either supplied (when they are known from an ODE or
    in closed form) or computed by :func:`~hermcurv.numerics.differentiate`.
    ``m`` is the Hirzebruch degree when the profile is meant to close up on
    :math:`\\mathbb{M}_m`; for open-interval profiles it is ``None``.
    """

    f: SampledFunction
    h: SampledFunction
    f1: SampledFunction
    f2: SampledFunction
    h1: SampledFunction
    h2: SampledFunction
    m: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        t = self.f.nodes
        for s in (self.h, self.f1, self.f2, self.h1, self.h2):
            if s.nodes.shape != t.shape or np.any(s.nodes != t):
                raise GridError("all profile samples must share one grid")
        if abs(t[0]) > 0:
            raise GridError("profile grids start at t = 0")
        interior = slice(1, -1) if self.m is not None else slice(None)
        if np.any(self.f.values[interior] <= 0) or np.any(self.h.values[interior] <= 0):
            raise DomainError("f and h must be positive on the open interval")

    @classmethod
    def from_samples(cls, t, f, h, m: int | None = None, **meta) -> "ProfilePair":
        """Build from bare samples; derivatives come from finite differences."""
        grid = Grid(np.asarray(t, dtype=float))
        fs, hs = SampledFunction(grid, f), SampledFunction(grid, h)
        return cls(fs, hs, differentiate(fs, 1), differentiate(fs, 2),
                   differentiate(hs, 1), differentiate(hs, 2), m, dict(meta))

    @classmethod
    def from_jets(cls, t, f, f1, f2, h, h1, h2, m: int | None = None, **meta) -> "ProfilePair":
        """Build from samples together with known first and second derivatives."""
        grid = Grid(np.asarray(t, dtype=float))
        s = [SampledFunction(grid, v) for v in (f, h, f1, f2, h1, h2)]
        return cls(s[0], s[1], s[2], s[3], s[4], s[5], m, dict(meta))

    @classmethod
    def from_functions(cls, f, h, l: float, n: int = 512, m: int | None = None,
                       **meta) -> "ProfilePair":
        """Sample callables ``f(t, k)``, ``h(t, k)`` returning the ``k``-th derivative."""
        t = np.linspace(0.0, l, n)
        return cls.from_jets(t, f(t, 0), f(t, 1), f(t, 2), h(t, 0), h(t, 1), h(t, 2), m, **meta)

    @property
    def t(self) -> np.ndarray:
        return self.f.nodes

    @property
    def l(self) -> float:
        return float(self.t[-1])

    @property
    def interior(self) -> np.ndarray:
        return self.t[1:-1]

    def jet(self, t) -> Jet:
        """Profile jet at ``t`` (exact at grid nodes, interpolated elsewhere)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lo_ok = t > 0 if self.m is not None else t >= 0
        hi_ok = t < self.l if self.m is not None else t <= self.l
        if not np.all(lo_ok & hi_ok):
            raise DomainError(f"t must lie in the open interval (0, {self.l})")
        nodes = self.t
        pos = np.searchsorted(nodes, t)
        on_node = (pos < nodes.size) & (nodes[np.minimum(pos, nodes.size - 1)] == t)
        out = []
        for s in (self.f, self.f1, self.f2, self.h, self.h1, self.h2):
            v = np.empty_like(t)
            v[on_node] = s.values[pos[on_node]]
            if np.any(~on_node):
                v[~on_node] = interpolate(nodes, s.values, t[~on_node])
            out.append(v)
        j = Jet(*out)
        if np.any(j.f <= 0) or np.any(j.h <= 0):
            raise DomainError("f and h must be positive where curvature is evaluated")
        return j


def _out(t, value):
    return float(value[0]) if np.ndim(t) == 0 else value


# ---------------------------------------------------------------------------
# closed forms on jets


def lee_form_jet(j: Jet):
    return 2.0 * (j.h * j.h1 - j.f) / j.h**2


def chern_scalar_jet(j: Jet):
    f, f1, f2, h, h1, h2 = j
    return (4 * h * f - 2 * f1 * f * h - 2 * h1 * f**2 + h1**2 * h * f - h1 * f1 * h**2
            - h2 * f * h**2 - f2 * h**3) / (h**3 * f)


def third_scalar_jet(j: Jet):
    f, f1, f2, h, h1, h2 = j
    return (-f2 * h**4 - 2 * f * (-h1 * f * h + 2 * f1 * h**2 + f**2 - 2 * h**2)) / (h**4 * f)


def riemannian_scalar_jet(j: Jet):
    f, f1, f2, h, h1, h2 = j
    return (-4 * h2 / h - 2 * f2 / f - 2 * h1**2 / h**2 - 4 * h1 * f1 / (h * f)
            - 2 * f**2 / h**4 + 8 / h**2)


def first_ricci_jet(j: Jet):
    f, f1, f2, h, h1, h2 = j
    rho12 = (4 * h**2 - 2 * f1 * h**2 - 2 * h1 * f * h) / h**4
    rho34 = (h1**2 * f - h1 * f1 * h - h2 * f * h - f2 * h**2) / (h**2 * f)
    return rho12, rho34


def second_ricci_jet(j: Jet):
    f, f1, f2, h, h1, h2 = j
    r12 = (-h2 * f * h**3 - f1 * h1 * h**3 + h1**2 * f * h**2 - 2 * h1 * f**2 * h
           - 2 * f**3 + 4 * h**2 * f) / (h**4 * f)
    r34 = 2 * f**2 / h**4 - 2 * f1 / h**2 - f2 / f
    return r12, r34


def codifferential_lee_jet(j: Jet):
    # delta(theta) = -(h^2 f)^{-1} d/dt (h^2 f theta_t), and h^2 f theta_t = 2 f (h h' - f)
    f, f1, f2, h, h1, h2 = j
    flux_dt = 2 * f1 * (h * h1 - f) + 2 * f * (h1**2 + h * h2 - f1)
    return -flux_dt / (h**2 * f)


def gauduchon_combination_jet(j: Jet):
    f, f1, f2, h, h1, h2 = j
    return (-3 * h2 * f * h**2 - f2 * h**3 - h1**2 * f * h - 3 * h1 * f1 * h**2
            - 2 * h1 * f**2 + 2 * f1 * f * h + 4 * f * h) / (h**3 * f)


# ---------------------------------------------------------------------------
# public pointwise operations


def lee_form(p: ProfilePair, t):
    """``dt``-coefficient of the Lee form, ``2 (h h' - f) / h**2``."""
    return _out(t, lee_form_jet(p.jet(t)))


def is_kahler(p: ProfilePair, tol: float = 1e-10) -> bool:
    """Whether ``f = h h'`` holds on the grid, relative to ``max |f|``."""
    defect = np.max(np.abs(p.f.values - p.h.values * p.h1.values))
    return bool(defect <= tol * np.max(np.abs(p.f.values)))


def chern_scalar(p: ProfilePair, t):
    """Chern scalar curvature ``s^C``."""
    return _out(t, chern_scalar_jet(p.jet(t)))


def third_scalar(p: ProfilePair, t):
    """Third scalar curvature ``s``."""
    return _out(t, third_scalar_jet(p.jet(t)))


def riemannian_scalar(p: ProfilePair, t):
    """Riemannian scalar curvature ``s^g`` of the Levi-Civita connection."""
    return _out(t, riemannian_scalar_jet(p.jet(t)))


def first_ricci(p: ProfilePair, t):
    """``(rho(E1, E2), rho(E3, E4))`` of the first (Hermitian) Ricci form."""
    a, b = first_ricci_jet(p.jet(t))
    return _out(t, a), _out(t, b)


def second_ricci(p: ProfilePair, t):
    """``(r(E1, E2), r(E3, E4))`` of the second Ricci form."""
    a, b = second_ricci_jet(p.jet(t))
    return _out(t, a), _out(t, b)


def codifferential_lee(p: ProfilePair, t):
    """Codifferential of the Lee form, ``-(h^2 f)^{-1} (h^2 f theta_t)'``."""
    return _out(t, codifferential_lee_jet(p.jet(t)))


def gauduchon_combination(p: ProfilePair, t):
    """Closed form of ``s^C + delta theta`` (the n = 2 Gauduchon functional density)."""
    return _out(t, gauduchon_combination_jet(p.jet(t)))


def ricci_closedness_residual(p: ProfilePair, t):
    """Residual of ``d rho = 0`` written as an ODE in ``t``.

    The bracket ``(4h^2 - 2f'h^2 - 2h'fh)/h^2`` is sampled on the profile grid
    and differentiated numerically, so the residual measures both the identity
    and the discretisation of the profile.
    """
    nodes = p.t
    f, f1, h, h1 = p.f.values, p.f1.values, p.h.values, p.h1.values
    bracket = (4 * h**2 - 2 * f1 * h**2 - 2 * h1 * f * h) / h**2
    d_bracket = differentiate(SampledFunction(p.f.grid, bracket), 1)
    jt = p.jet(t)
    rhs = 2 * (jt.h1**2 * jt.f - jt.h1 * jt.f1 * jt.h - jt.h2 * jt.f * jt.h
               - jt.f2 * jt.h**2) / jt.h**2
    lhs = interpolate(nodes, d_bracket.values, np.atleast_1d(np.asarray(t, dtype=float)))
    return _out(t, lhs - rhs)


@dataclass(frozen=True)
class CurvatureReport:
    """Pointwise curvature data along a set of ``t`` values."""

    t: np.ndarray
    sC: np.ndarray
    s3: np.ndarray
    sg: np.ndarray
    rho12: np.ndarray
    rho34: np.ndarray
    r12: np.ndarray
    r34: np.ndarray
    theta_t: np.ndarray
    delta_theta: np.ndarray

    @property
    def gauduchon(self) -> np.ndarray:
        return self.sC + self.delta_theta


def curvature_report(p: ProfilePair, t=None) -> CurvatureReport:
    """Closed-form curvature quantities on ``t`` (interior nodes by default)."""
    t = p.interior if t is None else np.atleast_1d(np.asarray(t, dtype=float))
    j = p.jet(t)
    rho12, rho34 = first_ricci_jet(j)
    r12, r34 = second_ricci_jet(j)
    return CurvatureReport(t, chern_scalar_jet(j), third_scalar_jet(j),
                           riemannian_scalar_jet(j), rho12, rho34, r12, r34,
                           lee_form_jet(j), codifferential_lee_jet(j))


# ---------------------------------------------------------------------------
# connection-level oracle

# [B_a, B_b] = _LIE[a, b, c] B_c for (B_a) = (X, Y, V, d/dt); [X,Y]=2V, [Y,V]=2X, [V,X]=2Y
_LIE = np.zeros((4, 4, 4))
for _a, _b, _c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _LIE[_a, _b, _c] = 2.0
    _LIE[_b, _a, _c] = -2.0

# J E_a = _J[a, b] E_b
_J = np.zeros((4, 4))
_J[0, 1], _J[1, 0], _J[2, 3], _J[3, 2] = 1.0, -1.0, 1.0, -1.0


def _frame_brackets(f, h, f1, h1) -> np.ndarray:
    """Structure functions ``[E_a, E_b] = C[a, b, c] E_c`` of ``E = B / w``."""
    one = f * 0 + 1
    w = np.array([h, h, f, one])
    w1 = np.array([h1, h1, f1, 0 * one])
    c = _LIE[:, :, :] * (w[None, None, :] / (w[:, None, None] * w[None, :, None]))
    c = c.astype(np.result_type(c, w))
    for b in range(4):
        # [d/dt, B_b / w_b] = -(w_b'/w_b) E_b
        c[3, b, b] += -w1[b] / w[b]
        c[b, 3, b] += w1[b] / w[b]
    return c


def _chern_gamma(c: np.ndarray) -> np.ndarray:
    """``G[i, k, l] = g(nabla_{E_i} E_k, E_l)`` for the Chern connection.

    In an orthonormal frame the derivative terms of the general formula vanish
    and only the bracket terms remain.
    """
    eye = np.eye(4)
    jv = _J

    def br(u, v):
        return np.einsum("a,b,abc->c", u, v, c)

    g = np.zeros((4, 4, 4), dtype=c.dtype)
    for i in range(4):
        x, jx = eye[i], eye[i] @ jv
        for k in range(4):
            z, jz = eye[k], eye[k] @ jv
            t1 = br(x, z) + br(jx, jz) + br(jx, z) @ jv - br(x, jz) @ jv
            for l in range(4):
                y, jy = eye[l], eye[l] @ jv
                t2 = br(x, y) + br(jx, jy) + br(jx, y) @ jv - br(x, jy) @ jv
                g[i, k, l] = 0.25 * t1[l] - 0.25 * t2[k]
    return g


def _levi_civita_gamma(c: np.ndarray) -> np.ndarray:
    # Koszul formula in an orthonormal frame
    return 0.5 * (c - np.transpose(c, (2, 0, 1)) + np.transpose(c, (1, 2, 0)))


_STEP = 1e-30


def _gamma_and_derivative(builder, j: Jet):
    """Connection coefficients and their ``t``-derivative by complex step."""
    c = _frame_brackets(j.f, j.h, j.f1, j.h1)
    gamma = builder(c)
    cz = _frame_brackets(j.f + 1j * _STEP * j.f1, j.h + 1j * _STEP * j.h1,
                         j.f1 + 1j * _STEP * j.f2, j.h1 + 1j * _STEP * j.h2)
    dgamma = builder(cz).imag / _STEP
    return c, gamma, dgamma


def _curvature(c, gamma, dgamma) -> np.ndarray:
    """``R[i, j, k, l] = g(R(E_i, E_j) E_k, E_l)`` with R = [nabla, nabla] - nabla_[,]."""
    r = np.zeros((4, 4, 4, 4))
    for i in range(4):
        for j in range(4):
            v = np.einsum("kl,lm->km", gamma[j], gamma[i]) - np.einsum("kl,lm->km", gamma[i], gamma[j])
            if i == 3:
                v += dgamma[j]
            if j == 3:
                v -= dgamma[i]
            v -= np.einsum("c,ckl->kl", c[i, j], gamma)
            r[i, j] = v
    return r


@dataclass(frozen=True)
class FrameConnection:
    """Chern connection of the ansatz at one value of ``t``.

    ``gamma[i, j, k] = g(nabla_{E_i} E_j, E_k)`` and ``brackets[i, j, k]`` is the
    ``E_k`` component of ``[E_i, E_j]`` (indices are 0-based).
    """

    t: float
    gamma: np.ndarray
    dgamma: np.ndarray
    brackets: np.ndarray

    def coefficient(self, i: int, j: int, k: int) -> float:
        """``E_k``-coefficient of ``nabla_{E_i} E_j`` with 1-based frame indices."""
        return float(self.gamma[i - 1, j - 1, k - 1])

    def torsion(self) -> np.ndarray:
        g = self.gamma
        return g - np.transpose(g, (1, 0, 2)) - self.brackets

    def curvature(self) -> np.ndarray:
        return _curvature(self.brackets, self.gamma, self.dgamma)


def _scalar_jet(p: ProfilePair, t) -> Jet:
    if np.ndim(t) != 0:
        raise ValueError("the connection oracle works one point at a time")
    return Jet(*[float(v[0]) for v in p.jet(t)])


def connection_oracle(p: ProfilePair, t: float) -> FrameConnection:
    """Chern connection coefficients rebuilt from the frame brackets."""
    j = _scalar_jet(p, t)
    c, gamma, dgamma = _gamma_and_derivative(_chern_gamma, j)
    return FrameConnection(float(t), gamma.real, dgamma, c.real)


def curvature_tensor(p: ProfilePair, t: float, connection: str = "chern") -> np.ndarray:
    """``g(R(E_i, E_j) E_k, E_l)`` for the Chern or Levi-Civita connection."""
    builder = {"chern": _chern_gamma, "levi-civita": _levi_civita_gamma}[connection]
    c, gamma, dgamma = _gamma_and_derivative(builder, _scalar_jet(p, t))
    return _curvature(c.real, gamma.real, dgamma)


def curvature_oracle(p: ProfilePair, t) -> CurvatureReport:
    """Curvature quantities from the connection level, independent of the closed forms.

    The Lee form is the trace of the Chern torsion and its codifferential is
    taken with the Levi-Civita connection.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    rows = []
    for tv in ts:
        j = _scalar_jet(p, tv)
        c, gamma, dgamma = _gamma_and_derivative(_chern_gamma, j)
        c, gamma = c.real, gamma.real
        r = _curvature(c, gamma, dgamma)
        rho = -r[:, :, 0, 1] - r[:, :, 2, 3]
        ric2 = -r[0, 1] - r[2, 3]
        s3 = -0.5 * np.einsum("ijij->", r)
        lc = _gamma_and_derivative(_levi_civita_gamma, j)
        rl = _curvature(lc[0].real, lc[1].real, lc[2])
        sg = np.einsum("ijji->", rl)

        def lee(jet):
            cc = _frame_brackets(jet.f, jet.h, jet.f1, jet.h1)
            gg = _chern_gamma(cc)
            torsion = gg - np.transpose(gg, (1, 0, 2)) - cc
            return np.einsum("aii->a", torsion)

        theta = lee(j).real
        jz = Jet(f=j.f + 1j * _STEP * j.f1, f1=j.f1 + 1j * _STEP * j.f2, f2=0.0,
                 h=j.h + 1j * _STEP * j.h1, h1=j.h1 + 1j * _STEP * j.h2, h2=0.0)
        dtheta_t = lee(jz).imag[3] / _STEP
        # delta theta = -sum_i (D_{E_i} theta)(E_i); only E_4 differentiates coefficients
        lcg = lc[1].real
        delta = -(dtheta_t - np.einsum("iil,l->", lcg, theta))
        rows.append((rho[0, 1] + rho[2, 3], s3, sg, rho[0, 1], rho[2, 3],
                     ric2[0, 1], ric2[2, 3], theta[3], delta))
    a = np.array(rows).T
    return CurvatureReport(ts, *a)


# ---------------------------------------------------------------------------
# reference profiles


def hopf_profile(l: float = 1.0, n: int = 64) -> ProfilePair:
    """Open-interval profile ``h = f = 1`` (product with the round orbit)."""
    def const(t, k):
        return np.ones_like(t) if k == 0 else np.zeros_like(t)

    return ProfilePair.from_functions(const, const, l, n, name="hopf")


def smooth_profile(a0, a1, b0, b1, l: float = np.pi, n: int = 512) -> ProfilePair:
    """``h = a0 + a1 sin(pi t / l)``, ``f = b0 + b1 t (l - t)`` with exact derivatives."""
    w = np.pi / l

    def h(t, k):
        return [a0 + a1 * np.sin(w * t), a1 * w * np.cos(w * t), -a1 * w * w * np.sin(w * t)][k]

    def f(t, k):
        return [b0 + b1 * t * (l - t), b1 * (l - 2 * t), -2 * b1 * np.ones_like(t)][k]

    return ProfilePair.from_functions(f, h, l, n, name="smooth",
                                      coefficients=(a0, a1, b0, b1))


def smooth_profile_corpus(count: int = 10, seed: int = 20200704, n: int = 512):
    """Seeded family of positive smooth profiles on ``[0, pi]``.

    Coefficients are drawn uniformly: ``a0`` in [1.5, 3], ``a1`` in [-1, 1],
    ``b0`` in [0.5, 2], ``b1`` in [-0.1, 0.4]; all keep ``f, h > 0``.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        a0, a1 = rng.uniform(1.5, 3.0), rng.uniform(-1.0, 1.0)
        b0, b1 = rng.uniform(0.5, 2.0), rng.uniform(-0.1, 0.4)
        out.append(smooth_profile(a0, a1, b0, b1, n=n))
    return out


def kahler_profile(l: float = 1.0, n: int = 512) -> ProfilePair:
    """Kähler instance ``h = 2 + sin t``, ``f = h h'`` on ``[0, l]`` (``l`` < pi/2 keeps f > 0)."""
    def h(t, k):
        return [2 + np.sin(t), np.cos(t), -np.sin(t)][k]

    def f(t, k):
        # f = h h' = (2 + sin t) cos t
        return [(2 + np.sin(t)) * np.cos(t),
                np.cos(2 * t) - 2 * np.sin(t),
                -2 * np.sin(2 * t) - 2 * np.cos(t)][k]

    return ProfilePair.from_functions(f, h, l, n, name="kahler")
