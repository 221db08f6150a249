r"""Admissible Kähler metrics on ruled surfaces and their conformal Chern scalar.

On ``P(O + L_m)`` over a genus ``g`` curve the admissible metric is fixed by
``x`` in ``(0, 1)`` and a momentum profile ``F(z)`` on ``[-1, 1]`` with

* ``F > 0`` on ``(-1, 1)``,
* ``F(+-1) = 0``,
* ``F'(+-1) = -+2 (1 +- x)``.

Rescaling by ``1/(z + b)^2`` gives a Hermitian metric whose Chern scalar is
``sC_tilde(z)``; requiring it constant turns into an Euler ODE for ``F``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DegeneracyError,
    DomainError,
    InvalidSolutionError,
    NoSolutionError,
    SolverError,
)
from .numerics import find_root_bracketed, solve_linear

BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class QuarticF:
    """``F(z) = (1 - z^2)((1 + x z) - c (1 - z^2))``; meets the end conditions for any ``c``."""

    x: float
    c: float

    @property
    def coefficients(self) -> np.ndarray:
        """Power-basis coefficients, constant term first."""
        x, c = self.x, self.c
        return np.array([1.0 - c, x, 2.0 * c - 1.0, -x, -c])

    def __call__(self, z, order: int = 0):
        poly = np.polynomial.Polynomial(self.coefficients).deriv(order)
        return poly(np.asarray(z, dtype=float))


@dataclass(frozen=True)
class EulerF:
    """General solution ``c1 (z+b)^4 + c2 (z+b) + y_p`` of the constant-``sC_tilde`` Euler ODE."""

    x: float
    b: float
    c1: float
    c2: float
    sC_tilde: float
    s_sigma: float

    def __call__(self, z, order: int = 0):
        z = np.asarray(z, dtype=float)
        w = z + self.b
        if np.any(w <= 0):
            raise DomainError("z + b must be positive")
        x, b, s, sig = self.x, self.b, self.sC_tilde, self.s_sigma
        if order == 0:
            yp = (2.0 / 3.0 * x * s * w * np.log(w)
                  + x / 18.0 * ((13 * b + 4 * z) * s - 6 * sig * (b + 3 * z) * w) - s / 2.0)
            return self.c1 * w**4 + self.c2 * w + yp
        if order == 1:
            yp = 2.0 / 3.0 * x * s * (np.log(w) + 1.0) + x / 18.0 * (4 * s - 6 * sig * (6 * z + 4 * b))
            return 4 * self.c1 * w**3 + self.c2 + yp
        if order == 2:
            return 12 * self.c1 * w**2 + 2.0 / 3.0 * x * s / w - 2.0 * x * sig
        raise ValueError("order must be 0, 1 or 2")


def euler_general_F(params: dict, z):
    """Evaluate the Euler-equation solution for ``params`` with keys ``x, b, c1, c2, sC_tilde, sSigma``."""
    return EulerF(params["x"], params["b"], params["c1"], params["c2"],
                  params["sC_tilde"], params["sSigma"])(z)


def euler_ode_residual(F: EulerF, z):
    """``(z+b)^2 F'' - 4 (z+b) F' + 4 F`` minus its constant-``sC_tilde`` right-hand side."""
    z = np.asarray(z, dtype=float)
    w = z + F.b
    lhs = w * w * F(z, 2) - 4 * w * F(z, 1) + 4 * F(z)
    rhs = 2 * F.s_sigma * F.x * w * w - 2 * (1 + F.x * z) * F.sC_tilde
    return lhs - rhs


@dataclass(frozen=True)
class MomentumGrid:
    """Interior momentum values, symmetric about 0."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if np.any(np.abs(nodes) >= 1):
            raise DomainError("momentum nodes must lie strictly inside (-1, 1)")
        if not np.allclose(nodes, -nodes[::-1], atol=1e-15):
            raise DomainError("momentum nodes must be symmetric about 0")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, n: int) -> "MomentumGrid":
        return cls(np.linspace(-1.0, 1.0, n + 2)[1:-1])


@dataclass(frozen=True)
class AdmissibleSolution:
    """An admissible metric together with the conformal parameter ``b``."""

    x: float
    b: float
    s_sigma: float
    sC_tilde: float
    F: QuarticF | EulerF
    genus: int | None = None
    m: int | None = None

    def __post_init__(self):
        if not 0 < self.x < 1:
            raise DomainError(f"x = {self.x} is not in (0, 1)")
        if self.genus is not None and self.m is not None:
            if abs(self.s_sigma - float(base_scalar(self.genus, self.m))) > 1e-8:
                raise DomainError("s_sigma does not match (2 - 2 genus)/m")

    @property
    def representation(self) -> str:
        return "quartic" if isinstance(self.F, QuarticF) else "euler"

    def boundary_residuals(self) -> np.ndarray:
        """``F(1), F(-1), F'(1) + 2(1+x), F'(-1) - 2(1-x)``."""
        x = self.x
        one = np.array([1.0, -1.0])
        return np.concatenate([self.F(one), self.F(one, 1) - np.array([-2 * (1 + x), 2 * (1 - x)])])

    def parameters(self) -> dict:
        out = {"x": self.x, "b": self.b, "sSigma": self.s_sigma, "sC_tilde": self.sC_tilde,
               "genus": self.genus, "m": self.m, "representation": self.representation}
        if isinstance(self.F, QuarticF):
            out["c"] = self.F.c
        else:
            out["c1"], out["c2"] = self.F.c1, self.F.c2
        return out


def base_scalar(genus: int, m: int) -> Fraction:
    """``s_Sigma = (2 - 2 genus)/m`` as an exact rational."""
    if genus < 0 or m < 1:
        raise DomainError("genus must be non-negative and m positive")
    return Fraction(2 - 2 * genus, m)


def _interior(z):
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) >= 1):
        raise DomainError("z must lie in (-1, 1)")
    return z


def admissible_scalar(sol: AdmissibleSolution, z):
    """Riemannian scalar curvature of the admissible Kähler metric."""
    z = _interior(z)
    return (2 * sol.s_sigma * sol.x - sol.F(z, 2)) / (1 + sol.x * z)


def admissible_laplacian(sol: AdmissibleSolution, p, z):
    """Laplacian of ``p(z)``; ``p(z, k)`` must return the ``k``-th derivative."""
    z = _interior(z)
    return -(sol.F(z, 1) * p(z, 1) + sol.F(z) * p(z, 2)) / (1 + sol.x * z)


def _shift(sol, z):
    w = z + sol.b
    if np.any(w <= 0):
        raise DomainError("conformal factor 1/(z + b)^2 is undefined where z + b <= 0")
    return w


def conformal_chern(sol: AdmissibleSolution, z):
    """Chern scalar of the metric rescaled by ``1/(z + b)^2``, in closed form."""
    z = _interior(z)
    w = _shift(sol, z)
    F = sol.F
    return (2 * sol.s_sigma * sol.x * w * w - w * w * F(z, 2) + 4 * w * F(z, 1) - 4 * F(z)) / (
        2 * (1 + sol.x * z))


def conformal_chern_from_laplacian(sol: AdmissibleSolution, z):
    """Same quantity through ``e^{-2u}(s^g/2 + 2 Laplacian(u))`` with ``u = -ln(z + b)``."""
    z = _interior(z)
    w = _shift(sol, z)

    def u(zz, k):
        ww = zz + sol.b
        return [-np.log(ww), -1.0 / ww, 1.0 / ww**2][k]

    return w * w * (0.5 * admissible_scalar(sol, z) + 2 * admissible_laplacian(sol, u, z))


def check_positivity_F(sol: AdmissibleSolution, n_scan: int = 1001) -> bool:
    """Whether ``F > 0`` on ``n_scan`` interior nodes."""
    if n_scan < 1001:
        raise ValueError("use at least 1001 scan nodes")
    return bool(np.all(sol.F(MomentumGrid.uniform(n_scan).nodes) > 0))


def quartic_solution(x: float, c: float, b: float = 2.0, s_sigma: float = 0.0,
                     sC_tilde: float = 0.0) -> AdmissibleSolution:
    """Wrap an arbitrary quartic profile (no curvature condition imposed)."""
    return AdmissibleSolution(x, b, s_sigma, sC_tilde, QuarticF(x, c))


# ---------------------------------------------------------------------------
# zero conformal Chern scalar with a quartic profile


def zero_chern_system(b: float, unknowns) -> np.ndarray:
    """Coefficient equations for ``(x, c, s_sigma, sC_tilde)`` from matching powers of ``z``."""
    x, c, sig, s = unknowns
    return np.array([
        2 * x - 8 * b * c,
        -12 * b * b * c - 4 * c + 2 - 2 * sig * x,
        -6 * b * b * x - 8 * b * c + 4 * b - 4 * sig * b * x + 2 * s * x,
        4 * b * b * c - 2 * b * b - 4 * b * x - 4 * c + 4 - 2 * sig * b * b * x + 2 * s,
    ])


def _zero_chern_jacobian(b, unknowns):
    x, c, sig, s = unknowns
    return np.array([
        [2.0, -8 * b, 0.0, 0.0],
        [-2 * sig, -12 * b * b - 4, -2 * x, 0.0],
        [-6 * b * b - 4 * sig * b + 2 * s, -8 * b, -4 * b * x, 2 * x],
        [-4 * b - 2 * sig * b * b, 4 * b * b - 4, -2 * b * b * x, 2.0],
    ])


def solve_zero_chern_system(b: float, tol: float = 1e-14, max_iter: int = 50) -> np.ndarray:
    """Newton iteration on the coefficient equations; each step is a 4x4 solve."""
    u = np.array([0.5, 0.5 / (4 * b), -2.0, 0.0])
    for _ in range(max_iter):
        r = zero_chern_system(b, u)
        step = solve_linear(_zero_chern_jacobian(b, u), -r)
        u = u + step
        if np.max(np.abs(step)) <= tol * max(1.0, np.max(np.abs(u))):
            return u
    raise SolverError("zero-Chern coefficient system did not converge")


def zero_chern_closed_form(b: float) -> tuple[float, float, float, float]:
    """``(x, c, s_sigma, sC_tilde)`` solving the coefficient equations."""
    x = 4 * b / (3 * b * b + 1)
    return x, 1 / (3 * b * b + 1), -1 / x, 0.0


def factored_F(b: float, z):
    """``(1 - z^2)(z + 3b)(z + b)/(3b^2 + 1)``."""
    z = np.asarray(z, dtype=float)
    return (1 - z * z) * (z + 3 * b) * (z + b) / (3 * b * b + 1)


def solve_zero_chern(b: float) -> AdmissibleSolution:
    """Quartic admissible metric conformal to one with vanishing Chern scalar."""
    if not b > 1:
        raise DomainError("b must exceed 1 (otherwise x leaves (0, 1) and F fails to be positive)")
    x, c, sig, s = solve_zero_chern_system(b)
    residual = np.max(np.abs(zero_chern_system(b, (x, c, sig, s))))
    if residual > 1e-10:
        raise SolverError(f"coefficient equations residual {residual:.3e}")
    sol = AdmissibleSolution(x, b, sig, s, QuarticF(x, c))
    _check_boundary(sol)
    return sol


def admissible_b_for_degree(genus: int, m: int) -> float:
    """The ``b > 1`` with ``4b/(3b^2 + 1) = m/(2 genus - 2)``."""
    if genus < 2:
        raise DomainError("a zero-Chern quartic solution needs genus >= 2")
    if m < 1 or m > 2 * genus - 2:
        raise DomainError(f"degree bound violated: need 1 <= m <= 2 genus - 2 = {2 * genus - 2}")
    x = m / (2 * genus - 2)
    b = (2 + math.sqrt(4 - 3 * x * x)) / (3 * x)
    if not b > 1:
        raise DomainError("x = 1 gives b = 1, where F is no longer positive")
    return b


# ---------------------------------------------------------------------------
# constant conformal Chern scalar with the Euler-equation profile


def _A(x: float, b: float) -> float:
    return (3 * b * x * (b * b - 1) ** 2 * math.log((b - 1) / (b + 1))
            + 6 * b**4 * x - 16 * b * b * x + 12 * b - 2 * x)


def closed_form_coefficients(x: float, b: float) -> dict:
    """``sC_tilde, sSigma, c1, c2`` meeting all four end conditions for given ``x, b``."""
    if not b > 1:
        raise DomainError("b must exceed 1")
    if not 0 < x < 1:
        raise DomainError("x must lie in (0, 1)")
    A = _A(x, b)
    scale = 12 * b + 6 * b**4 * x
    if abs(A) <= 1e-13 * scale:
        raise DegeneracyError(f"A(x={x}, b={b}) vanishes")
    L = math.log((b - 1) / (b + 1))
    lm, lp = math.log(b - 1), math.log(b + 1)
    b2, b3, b4 = b * b, b**3, b**4
    s_c = -6 * (b2 - 1) * (3 * b2 * x - 4 * b + x) / A
    s_sigma = (-3 * x * (b2 - 1) * (b3 - 3 * b2 * x + 3 * b - x) * L
               + (18 * b3 + 6 * b) * x * x + (-6 * b4 - 26 * b2 - 4) * x + 12 * b) / (x * A)
    c1 = -x * ((b3 - b2 * x - b + x) * lm + (-b3 + b2 * x + b - x) * lp
               + 2 * b2 - 3 * b * x + 1) / A
    c2 = (6 * x * (b2 - 1) * ((b3 * x + 3 * b2 * x + (-x - 4) * b + x) * lm
                              - (b3 * x - 3 * b2 * x + (-x + 4) * b - x) * lp)
          + (48 * b4 - 20 * b2 - 4) * x * x + (-84 * b3 + 12 * b) * x + 48 * b2) / (3 * A)
    return {"sC_tilde": s_c, "sSigma": s_sigma, "c1": c1, "c2": c2}


def euler_solution(x: float, b: float, genus: int | None = None,
                   m: int | None = None) -> AdmissibleSolution:
    """Assemble the admissible solution defined by the closed-form coefficients."""
    k = closed_form_coefficients(x, b)
    F = EulerF(x, b, k["c1"], k["c2"], k["sC_tilde"], k["sSigma"])
    sol = AdmissibleSolution(x, b, k["sSigma"], k["sC_tilde"], F, genus, m)
    _check_boundary(sol)
    return sol


def _check_boundary(sol: AdmissibleSolution) -> None:
    worst = float(np.max(np.abs(sol.boundary_residuals())))
    if worst > BOUNDARY_TOL:
        raise InvalidSolutionError(f"end conditions violated by {worst:.3e}")


def x_roots_for_genus(genus: int, m: int, b: float, n_scan: int = 500) -> list[float]:
    """All ``x`` in ``(0, 1)`` where the closed-form ``s_Sigma`` equals ``(2 - 2 genus)/m``.

    Sign changes across poles of the closed form (zeros of ``A``) are discarded.
    """
    target = float(base_scalar(genus, m))

    def g(x):
        return closed_form_coefficients(x, b)["sSigma"] - target

    xs = np.linspace(1e-3, 1 - 1e-3, n_scan)
    values, a_signs = [], []
    for xv in xs:
        try:
            values.append(g(xv))
        except DegeneracyError:
            values.append(np.nan)
        a_signs.append(np.sign(_A(xv, b)))
    roots = []
    for i in range(n_scan - 1):
        v0, v1 = values[i], values[i + 1]
        if not (np.isfinite(v0) and np.isfinite(v1)) or v0 * v1 > 0:
            continue
        if a_signs[i] != a_signs[i + 1]:
            continue
        r = find_root_bracketed(g, xs[i], xs[i + 1], tol=1e-15)
        if abs(g(r)) <= 1e-8 * max(1.0, abs(target)):
            roots.append(r)
    return roots


def solve_x_for_genus(genus: int, m: int, b: float, all_roots: bool = False):
    """Admissible solution with constant conformal Chern scalar for given genus, degree and ``b``.

    When several ``x`` qualify, the one with a positive profile ``F`` and the
    smallest ``x`` is returned; ``all_roots=True`` returns every candidate.
    """
    if not b > 1:
        raise DomainError("b must exceed 1")
    roots = x_roots_for_genus(genus, m, b)
    if not roots:
        raise NoSolutionError(f"no x in (0, 1) for genus={genus}, m={m}, b={b}")
    sols = [euler_solution(r, b, genus, m) for r in roots]
    if all_roots:
        return sols
    good = [s for s in sols if check_positivity_F(s)]
    if not good:
        raise InvalidSolutionError("F is not positive on (-1, 1) for any root")
    return good[0]


TABLE_ROWS = ((1, 1, 2.0), (2, 1, 2.0), (2, 1, 3.0))
