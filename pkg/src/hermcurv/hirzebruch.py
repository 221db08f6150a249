r"""Metrics on the Hirzebruch surfaces from one-variable ODEs.

Each construction substitutes ``h`` and ``f`` in terms of a single monotone
function ``phi(t)`` and writes ``phi' = -+ sqrt(y(phi))``.  The curvature
condition then becomes a linear second-order ODE for ``y`` whose general
solution is a short sum of powers of ``phi``:

========  ==========================  ==================================================
kind      substitution                y(phi)
========  ==========================  ==================================================
chern     h = phi, f = -phi phi'/2    (-lam phi^6 + 3 c1 phi^5 - 6 phi^4 + 3 c2) / (3 phi^4)
third     h = sqrt(phi), f = phi'/4   (-8 lam phi^(5/2) + 15 c1 phi + 160 phi^(3/2) + 15 c2) / (15 sqrt(phi))
critical  h = phi, f = -7 phi phi'/5  -5 lam phi^2 / 84 + c1 phi^(-4/5) + c2 phi^(-10) + 1
========  ==========================  ==================================================

The metric closes up smoothly when ``y`` vanishes at the two end values of
``phi`` with slopes fixed by the degree ``m``.  ``t(phi)`` is then a singular
integral of ``1/sqrt(y)``, inverted to obtain the profile on a uniform
``t`` grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import frame
from .errors import (
    AccuracyError,
    DegeneracyError,
    DomainError,
    InvalidSolutionError,
    NoSolutionError,
    UnsupportedDegreeError,
)
from .frame import ProfilePair
from .numerics import (
    Grid,
    SampledFunction,
    extrapolate_to,
    find_root_bracketed,
    integrate_endpoint_singular,
    invert_monotone,
    solve_linear,
)

KINDS = ("chern", "third", "critical")


@dataclass(frozen=True)
class ClosedFormSolution:
    """Parameters of one closed-form ``y(phi)``.

    ``phi0 = phi(0)`` and ``phi1 = phi(l)``.  ``phi`` decreases for ``chern`` and
    ``critical`` and increases for ``third``.
    """

    kind: str
    m: int
    phi0: float
    phi1: float
    lam: float
    c1: float
    c2: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def direction(self) -> int:
        """Sign of ``phi'``: -1 when ``phi`` decreases along ``t``."""
        return 1 if self.kind == "third" else -1

    def terms(self) -> list[tuple[float, float]]:
        """``y`` as a list of ``(coefficient, power)`` pairs."""
        lam, c1, c2 = self.lam, self.c1, self.c2
        if self.kind == "chern":
            return [(-lam / 3.0, 2.0), (c1, 1.0), (-2.0, 0.0), (c2, -4.0)]
        if self.kind == "third":
            return [(-8.0 * lam / 15.0, 2.0), (32.0 / 3.0, 1.0), (c1, 0.5), (c2, -0.5)]
        return [(-5.0 * lam / 84.0, 2.0), (c1, -0.8), (c2, -10.0), (1.0, 0.0)]

    def y(self, phi, order: int = 0):
        """``y`` or its ``order``-th derivative with respect to ``phi``."""
        phi = np.asarray(phi, dtype=float)
        if np.any(phi <= 0):
            raise DomainError("phi must be positive")
        total = np.zeros_like(phi)
        for a, p in self.terms():
            coef, q = a, p
            for k in range(order):
                coef *= q
                q -= 1
            if coef != 0.0:
                total = total + coef * phi**q
        return total if total.ndim else float(total)

    def y_shifted(self, anchor: float, delta):
        """``y(anchor + delta) - y(anchor)`` without cancellation for small ``delta``."""
        delta = np.asarray(delta, dtype=float)
        ratio = np.log1p(delta / anchor)
        total = np.zeros_like(delta)
        for a, p in self.terms():
            if p != 0.0:
                total = total + a * anchor**p * np.expm1(p * ratio)
        return total

    def y_between(self, d_start, d_end):
        """``y`` at the point at distance ``d_start`` from ``phi0`` and ``d_end`` from ``phi1``.

        Both end values are zeros of ``y``; the expansion is anchored at the
        nearer one so the result keeps full relative accuracy near both ends.
        """
        d_start = np.asarray(d_start, dtype=float)
        d_end = np.asarray(d_end, dtype=float)
        s = self.direction
        near_start = d_start <= d_end
        return np.where(near_start,
                        self.y_shifted(self.phi0, s * d_start),
                        self.y_shifted(self.phi1, -s * d_end))


def y_eval(sol: ClosedFormSolution, phi):
    """Evaluate the closed form ``y(phi)`` of ``sol``."""
    return sol.y(phi)


@dataclass(frozen=True)
class RatioPolynomial:
    """Polynomial whose root fixes the ratio of the end values of ``phi``.

    For ``chern`` the variable is ``x = phi0/phi1`` and the coefficients are in
    powers of ``x`` (highest first).  For ``third`` the variable is
    ``x = phi1/phi0`` and the coefficients are in powers of ``sqrt(x)``.
    """

    kind: str
    m: int
    coefficients: tuple[float, ...]

    @classmethod
    def chern(cls, m: int) -> "RatioPolynomial":
        return cls("chern", m, (m + 2, -(2 * m - 1), -3 * m, -(2 * m + 1), m - 2))

    @classmethod
    def third(cls, m: int) -> "RatioPolynomial":
        return cls("third", m, (6 * m - 8, 9 * m - 6, 9 * m + 6, 6 * m + 8))

    def __call__(self, x):
        v = np.sqrt(x) if self.kind == "third" else x
        return np.polyval(self.coefficients, v)


def chern_degree(phi0: float, phi1: float) -> float:
    """Degree ``m`` implied by the end values of a constant-Chern solution."""
    p0, p1 = phi0, phi1
    den = p0**4 - 2 * p0**3 * p1 - 3 * p0**2 * p1**2 - 2 * p0 * p1**3 + p1**4
    return (-2 * p0**4 - p0**3 * p1 + p0 * p1**3 + 2 * p1**4) / den


def third_degree(phi0: float, phi1: float) -> float:
    """Degree ``m`` implied by the end values of a constant-third-scalar solution."""
    r0, r1 = math.sqrt(phi0), math.sqrt(phi1)
    num = -8 * phi0 * r0 + 8 * phi1 * r1 + 6 * r0 * phi1 - 6 * r1 * phi0
    den = 6 * phi0 * r0 + 6 * phi1 * r1 + 9 * r0 * phi1 + 9 * r1 * phi0
    return num / den


def chern_ratio_root(m: int) -> float:
    """Smallest root ``x > 1`` of the constant-Chern ratio polynomial."""
    if m < 1:
        raise DomainError("the degree must be a positive integer")
    poly = RatioPolynomial.chern(m)
    lo = 1.0 + 1e-9
    while True:
        hi = lo + 0.5
        if poly(lo) * poly(hi) <= 0:
            return find_root_bracketed(poly, lo, hi, tol=1e-15)
        lo = hi


def solve_chern(m: int, phi1: float = 1.0) -> ClosedFormSolution:
    """Constant Chern scalar curvature solution with ``phi(l) = phi1``."""
    if phi1 <= 0:
        raise DomainError("phi1 must be positive")
    x = chern_ratio_root(m)
    p0, p1 = x * phi1, float(phi1)
    den = p0**4 - 2 * p0**3 * p1 - 3 * p0**2 * p1**2 - 2 * p0 * p1**3 + p1**4
    lam = -6 * (3 * p0**2 + 4 * p0 * p1 + 3 * p1**2) / den
    c1 = -4 * (p0**3 + 3 * p0**2 * p1 + 3 * p0 * p1**2 + p1**3) / den
    c2 = 2 * p0**4 * p1**4 / den
    sol = ClosedFormSolution("chern", m, p0, p1, lam, c1, c2)
    _check_closed_form(sol, slope=4.0 * m)
    if abs(chern_degree(p0, p1) - m) > 1e-10 * max(1, m):
        raise AccuracyError("degree identity not reproduced")
    return sol


def chern_factored_y(sol: ClosedFormSolution, phi):
    """Factored form of ``y`` for a constant-Chern solution (manifestly signed)."""
    p0, p1, m = sol.phi0, sol.phi1, sol.m
    phi = np.asarray(phi, dtype=float)
    big = (phi**4 * (3 * p0**2 + 4 * p1 * p0 + 3 * p1**2)
           + phi**3 * (p0**3 + p0**2 * p1 + p0 * p1**2 + p1**3)
           + phi**2 * (p0**3 * p1 + p0**2 * p1**2 + p0 * p1**3)
           + phi * (p0**3 * p1**2 + p0**2 * p1**3) + p0**3 * p1**3)
    return (2 * m * (p0 - phi) * (p1 - phi) * big
            / (phi**4 * (p1 + p0) * (p1 - p0) * (2 * p0**2 + 2 * p1**2 + p0 * p1)))


def third_ratio(m: int = 1) -> float:
    """``phi1/phi0`` for the constant-third-scalar solution (explicit for m = 1)."""
    if m != 1:
        raise UnsupportedDegreeError(
            f"unsupported degree m={m}: constant third scalar curvature is only "
            "constructed for m = 1 (the ratio polynomial has no root x > 1 otherwise)")
    c = 44.0 + 11.0 * math.sqrt(5.0)
    cr = c ** (1.0 / 3.0)
    return (cr / 2.0 + 11.0 / (2.0 * cr) + 0.5) ** 2


def solve_third(m: int, phi0: float = 1.0) -> ClosedFormSolution:
    """Constant third scalar curvature solution with ``phi(0) = phi0`` (m = 1 only)."""
    if phi0 <= 0:
        raise DomainError("phi0 must be positive")
    x = third_ratio(m)
    p0, p1 = float(phi0), x * phi0
    r0, r1 = math.sqrt(p0), math.sqrt(p1)
    den = 6 * p0 * r0 + 6 * p1 * r1 + 9 * r0 * p1 + 9 * r1 * p0
    lam = 40.0 / (2 * p0 + 2 * p1 + r0 * r1)
    c1 = -32 * r0 * r1 * (p0 + p1 + 3 * r0 * r1) / den
    c2 = -32 * (p0 * p1) ** 1.5 / den
    sol = ClosedFormSolution("third", m, p0, p1, lam, c1, c2)
    _check_closed_form(sol, slope=8.0 * m)
    return sol


# scaled unknowns (a, b, C) = (lam phi0^2, c1 phi0^(-4/5), c2 phi1^(-10)) and r = phi1/phi0
def _critical_coefficients(r: float, m: int):
    mat = np.array([
        [-5.0 / 84.0, 1.0, r**10],
        [-5.0 * r * r / 84.0, r**-0.8, 1.0],
        [-10.0 / 84.0, -0.8, -10.0 * r**10],
    ])
    rhs = np.array([-1.0, -1.0, -10.0 * m / 7.0])
    return solve_linear(mat, rhs)


def _critical_residual(r: float, m: int) -> float:
    # phi1 * y'(phi1) - 10 m / 7
    a, b, c = _critical_coefficients(r, m)
    return -10.0 * a * r * r / 84.0 - 0.8 * b * r**-0.8 - 10.0 * c - 10.0 * m / 7.0


def solve_critical(m: int, phi0: float = 1.0, n_probe: int = 2000) -> ClosedFormSolution:
    """Solution with ``s^C + delta theta`` constant and ``phi(0) = phi0``.

    Three of the four end conditions are linear in ``(lam, c1, c2)`` once the
    ratio ``r = phi1/phi0`` is fixed; the fourth is a scalar equation in ``r``
    that is bracketed on a log-spaced scan of ``(1e-6, 1 - 1e-6)``.
    """
    if m < 1:
        raise DomainError("the degree must be a positive integer")
    if phi0 <= 0:
        raise DomainError("phi0 must be positive")
    probes = np.geomspace(1e-6, 1.0 - 1e-6, n_probe)
    values = []
    for r in probes:
        try:
            values.append(_critical_residual(r, m))
        except DegeneracyError:
            values.append(np.nan)
    values = np.array(values)
    roots = []
    for i in range(n_probe - 1):
        v0, v1 = values[i], values[i + 1]
        if np.isfinite(v0) and np.isfinite(v1) and v0 * v1 < 0:
            roots.append(find_root_bracketed(lambda r: _critical_residual(r, m),
                                             probes[i], probes[i + 1], tol=1e-15))
    candidates = []
    for r in sorted(roots, reverse=True):
        a, b, c = _critical_coefficients(r, m)
        p1 = r * phi0
        sol = ClosedFormSolution("critical", m, float(phi0), float(p1), float(a / phi0**2),
                                 float(b * phi0**0.8), float(c * p1**10))
        if sol.lam > 0 and positivity_check(sol):
            candidates.append(sol)
    if not candidates:
        raise NoSolutionError(f"no admissible critical solution found for m={m}")
    sol = candidates[0]
    _check_closed_form(sol, slope=10.0 * m / 7.0)
    return sol


def _check_closed_form(sol: ClosedFormSolution, slope: float) -> None:
    """End values are zeros of ``y`` with the slopes that make ``f'`` equal ``+-m`` there."""
    p0, p1 = sol.phi0, sol.phi1
    scale = max(abs(a) * p0**p for a, p in sol.terms())
    if abs(sol.y(p0)) > 1e-10 * scale or abs(sol.y(p1)) > 1e-10 * scale:
        raise AccuracyError("y does not vanish at both end values")
    s = sol.direction
    # phi' = s sqrt(y) and f'(0) = m translate to phi0 y'(phi0) = s * slope (chern/critical: y' < 0)
    if sol.kind == "third":
        expected0, expected1 = slope, -slope
        got0, got1 = sol.y(p0, 1), sol.y(p1, 1)
    else:
        expected0, expected1 = -slope, slope
        got0, got1 = p0 * sol.y(p0, 1), p1 * sol.y(p1, 1)
    if abs(got0 - expected0) > 1e-8 * slope or abs(got1 - expected1) > 1e-8 * slope:
        raise AccuracyError(f"end slopes {got0}, {got1} differ from {expected0}, {expected1}")
    if not sol.lam > 0:
        raise InvalidSolutionError(f"lambda = {sol.lam} is not positive")


def positivity_check(sol: ClosedFormSolution, n_scan: int = 1000) -> bool:
    """Whether ``y > 0`` strictly between the end values."""
    if n_scan < 100:
        raise ValueError("use at least 100 scan nodes")
    w = abs(sol.phi1 - sol.phi0)
    sigma = np.linspace(0.0, 0.5 * np.pi, n_scan + 2)[1:-1]
    y = sol.y_between(w * np.sin(sigma) ** 2, w * np.cos(sigma) ** 2)
    return bool(np.all(y > 0))


# ---------------------------------------------------------------------------
# profiles


def _phi_jets(sol: ClosedFormSolution, phi, y):
    """``phi'``, ``phi''``, ``phi'''`` from ``phi' = s sqrt(y)``."""
    d1 = sol.direction * np.sqrt(np.maximum(y, 0.0))
    d2 = 0.5 * sol.y(phi, 1)
    d3 = 0.5 * sol.y(phi, 2) * d1
    return d1, d2, d3


def _profile_jets(sol: ClosedFormSolution, phi, d1, d2, d3):
    if sol.kind == "third":
        root = np.sqrt(phi)
        h, h1 = root, d1 / (2 * root)
        h2 = d2 / (2 * root) - d1**2 / (4 * phi * root)
        f, f1, f2 = d1 / 4, d2 / 4, d3 / 4
    else:
        k = 0.5 if sol.kind == "chern" else 1.4
        h, h1, h2 = phi, d1, d2
        f = -k * phi * d1
        f1 = -k * (d1**2 + phi * d2)
        f2 = -k * (3 * d1 * d2 + phi * d3)
    return f, f1, f2, h, h1, h2


@dataclass(frozen=True)
class ParametrisedLength:
    """``t`` sampled against the angle ``sigma`` with ``phi = phi0 + s W sin^2(sigma)``."""

    sigma: np.ndarray
    t: np.ndarray
    width: float

    @property
    def length(self) -> float:
        return float(self.t[-1])


def length_table(sol: ClosedFormSolution, n_pieces: int = 2048,
                 tol: float = 1e-15) -> ParametrisedLength:
    """Cumulative ``t(phi)`` by tanh-sinh quadrature of ``1/sqrt(y)``.

    The interval between the end values is cut at ``phi0 + s W sin^2(sigma_j)``
    for uniform ``sigma_j``; each piece is integrated with exact distances to
    both singular ends.
    """
    w = abs(sol.phi1 - sol.phi0)
    sigma = np.linspace(0.0, 0.5 * np.pi, n_pieces + 1)
    d_start = w * np.sin(sigma) ** 2
    d_end = w * np.cos(sigma) ** 2
    d_end[-1] = 0.0
    # piece widths without cancellation: sin^2 b - sin^2 a = sin(b + a) sin(b - a)
    widths = w * np.sin(sigma[1:] + sigma[:-1]) * np.sin(sigma[1:] - sigma[:-1])
    t = np.zeros(n_pieces + 1)
    for j in range(n_pieces):
        s0, e1 = d_start[j], d_end[j + 1]

        def integrand(x, da, db, s0=s0, e1=e1):
            return 1.0 / np.sqrt(sol.y_between(s0 + da, e1 + db))

        t[j + 1] = t[j] + integrate_endpoint_singular(integrand, 0.0, widths[j], tol, offsets=True)
    return ParametrisedLength(sigma, t, w)


def profile_length(sol: ClosedFormSolution, tol: float = 1e-13) -> float:
    """Length ``l`` of the ``t`` interval, as one singular integral."""
    w = abs(sol.phi1 - sol.phi0)
    return integrate_endpoint_singular(
        lambda x, da, db: 1.0 / np.sqrt(sol.y_between(da, db)), 0.0, w, tol, offsets=True)


def build_profile(sol: ClosedFormSolution, n_grid: int = 512, oversample: int = 4) -> ProfilePair:
    """Assemble the profile ``(f, h)`` on a uniform grid of ``[0, l]``.

    ``phi(t)`` comes from inverting the quadrature table; the derivatives of
    ``f`` and ``h`` follow from ``phi' = -+ sqrt(y)`` by the chain rule.
    """
    if n_grid < 64:
        raise ValueError("n_grid must be at least 64")
    if not positivity_check(sol):
        raise InvalidSolutionError("y is not positive between the end values")
    table = length_table(sol, n_pieces=oversample * n_grid)
    inverse = invert_monotone(SampledFunction(Grid(table.sigma), table.t), n_out=n_grid)
    t = inverse.nodes
    t[0], t[-1] = 0.0, table.length
    sigma = inverse.values
    w = table.width
    d_start = w * np.sin(sigma) ** 2
    d_end = w * np.cos(sigma) ** 2
    d_start[0], d_end[-1] = 0.0, 0.0
    phi = np.where(d_start <= d_end, sol.phi0 + sol.direction * d_start,
                   sol.phi1 - sol.direction * d_end)
    y = sol.y_between(d_start, d_end)
    y[0], y[-1] = 0.0, 0.0
    d1, d2, d3 = _phi_jets(sol, phi, y)
    jets = _profile_jets(sol, phi, d1, d2, d3)
    return ProfilePair.from_jets(t, *jets, m=sol.m, kind=sol.kind, solution=sol,
                                 phi=phi, dphi=d1, sigma=sigma)


# ---------------------------------------------------------------------------
# verification


def defining_scalar(p: ProfilePair, kind: str, t=None):
    """The curvature quantity each construction makes constant."""
    t = p.interior if t is None else t
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    fn = {"chern": frame.chern_scalar, "third": frame.third_scalar,
          "critical": frame.gauduchon_combination}[kind]
    return fn(p, t)


def boundary_residuals(p: ProfilePair, m: int | None = None, n_extrap: int = 4) -> dict:
    """End conditions ``f'(0) = m = -f'(l)``, ``h'(0) = h'(l) = 0``.

    The end values are limits, so each is extrapolated polynomially from the
    ``n_extrap`` nearest interior nodes.
    """
    m = p.m if m is None else m
    t = p.t
    left, right = slice(1, 1 + n_extrap), slice(-1 - n_extrap, -1)

    def ends(s):
        return (extrapolate_to(t[0], t[left], s.values[left]),
                extrapolate_to(t[-1], t[right], s.values[right]))

    f1_0, f1_l = ends(p.f1)
    h1_0, h1_l = ends(p.h1)
    f_0, f_l = ends(p.f)
    return {
        "f1_0": abs(f1_0 - m),
        "f1_l": abs(f1_l + m),
        "h1_0": abs(h1_0),
        "h1_l": abs(h1_l),
        "f_0": abs(f_0),
        "f_l": abs(f_l),
    }


@dataclass
class SolveReport:
    """Residuals certifying one constructed profile."""

    kind: str
    m: int
    lam: float
    length: float
    constancy: float
    boundary: dict
    positive: bool
    ode_residual: float
    diagnostics: dict = field(default_factory=dict)

    def passed(self, tol: float = 1e-6, boundary_tol: float = 1e-4) -> bool:
        return (self.positive and self.lam > 0 and self.constancy <= tol
                and max(self.boundary.values()) <= boundary_tol)


def verify_profile(p: ProfilePair, sol: ClosedFormSolution) -> SolveReport:
    """Constancy, boundary, positivity and ODE residuals of a built profile."""
    from .numerics import differentiate

    values = np.asarray(defining_scalar(p, sol.kind))
    constancy = float(np.max(np.abs(values - sol.lam)) / abs(sol.lam))
    phi = SampledFunction(p.f.grid, p.meta["phi"])
    dphi = differentiate(phi, 1).values
    expected = sol.direction * np.sqrt(np.maximum(sol.y(phi.values), 0.0))
    ode = float(np.max(np.abs(dphi - expected)))
    return SolveReport(sol.kind, sol.m, sol.lam, p.l, constancy, boundary_residuals(p, sol.m),
                       positivity_check(sol), ode,
                       {"n_grid": p.t.size, "phi0": sol.phi0, "phi1": sol.phi1})


def solve(kind: str, m: int, scale: float = 1.0) -> ClosedFormSolution:
    """Dispatch to the solver of ``kind``; ``scale`` is ``phi1`` for chern, ``phi0`` otherwise."""
    if kind == "chern":
        return solve_chern(m, scale)
    if kind == "third":
        return solve_third(m, scale)
    if kind == "critical":
        return solve_critical(m, scale)
    raise ValueError(f"unknown kind {kind!r}")
