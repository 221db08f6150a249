"""Shared numerical kernels.

Everything here is a pure function of its inputs.  The kernels are small on
purpose: root bracketing, tiny dense solves, double-exponential quadrature for
integrands with inverse-square-root endpoint behaviour, inversion of monotone
samples and finite-difference differentiation on arbitrary grids.

Differentiation uses Fornberg's recursion for finite-difference weights on a
sliding 9-point stencil.  On a grid of spacing ``dx`` this is exact for
polynomials of degree 8, so the truncation error is O(dx**8) for first,
O(dx**7) for second and O(dx**6) for third derivatives.  The same weights with
derivative order 0 give local Lagrange interpolation, which is how sampled
functions are evaluated off-grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    AccuracyError,
    BracketError,
    DegeneracyError,
    EvaluationError,
    GridError,
    MonotonicityError,
)

STENCIL = 9
INTERP_WIDTH = 10
MIN_NODES = 8


@dataclass(frozen=True)
class Grid:
    """Strictly increasing abscissae.

    ``kind`` is ``"uniform"`` for equispaced nodes and ``"clustered"`` for
    anything else (Chebyshev-like or data-driven spacing).
    """

    nodes: np.ndarray
    kind: str = "uniform"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < MIN_NODES:
            raise GridError(f"a grid needs at least {MIN_NODES} nodes, got {nodes.size}")
        if not np.all(np.isfinite(nodes)) or np.any(np.diff(nodes) <= 0):
            raise GridError("grid nodes must be finite and strictly increasing")
        if self.kind not in ("uniform", "clustered"):
            raise GridError(f"unknown grid kind {self.kind!r}")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, a: float, b: float, n: int) -> "Grid":
        return cls(np.linspace(a, b, n), "uniform")

    def __len__(self) -> int:
        return self.nodes.size

    @property
    def a(self) -> float:
        return float(self.nodes[0])

    @property
    def b(self) -> float:
        return float(self.nodes[-1])


@dataclass(frozen=True)
class SampledFunction:
    """Values of a smooth function on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.nodes.shape:
            raise GridError(
                f"{values.size} values for a grid of {self.grid.nodes.size} nodes"
            )
        if not np.all(np.isfinite(values)):
            raise EvaluationError("sampled values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def __call__(self, x, order: int = 0):
        """Evaluate the local interpolant (or its ``order``-th derivative) at ``x``."""
        x = np.asarray(x, dtype=float)
        out = interpolate(self.grid.nodes, self.values, x.ravel(), order=order)
        return out.reshape(x.shape) if x.ndim else float(out[0])


# ---------------------------------------------------------------------------
# finite-difference weights


def fornberg_weights(z, x, max_order: int) -> np.ndarray:
    """Finite-difference weights for a batch of stencils.

    Parameters
    ----------
    z : array_like, shape (B,)
        Evaluation points.
    x : array_like, shape (B, n)
        Stencil nodes for each evaluation point.
    max_order : int
        Highest derivative order required.

    Returns
    -------
    ndarray, shape (B, max_order + 1, n)
        ``c[b, k, j]`` is the weight of ``f(x[b, j])`` in the approximation of
        the ``k``-th derivative at ``z[b]``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    x = np.atleast_2d(np.asarray(x, dtype=float))
    nb, n = x.shape
    c = np.zeros((nb, max_order + 1, n))
    c1 = np.ones(nb)
    c4 = x[:, 0] - z
    c[:, 0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, max_order)
        c2 = np.ones(nb)
        c5 = c4
        c4 = x[:, i] - z
        for j in range(i):
            c3 = x[:, i] - x[:, j]
            c2 = c2 * c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[:, k, i] = c1 * (k * c[:, k - 1, i - 1] - c5 * c[:, k, i - 1]) / c2
                c[:, 0, i] = -c1 * c5 * c[:, 0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[:, k, j] = (c4 * c[:, k, j] - k * c[:, k - 1, j]) / c3
            c[:, 0, j] = c4 * c[:, 0, j] / c3
        c1 = c2
    return c


def _windows(nodes: np.ndarray, z: np.ndarray, width: int) -> np.ndarray:
    """Index windows of ``width`` consecutive nodes centred on each ``z``."""
    n = nodes.size
    if n < width:
        raise GridError(f"stencil of width {width} needs at least {width} nodes, got {n}")
    pos = np.searchsorted(nodes, z)
    start = np.clip(pos - width // 2, 0, n - width)
    return start[:, None] + np.arange(width)[None, :]


def interpolate(nodes, values, z, order: int = 0, width: int = INTERP_WIDTH) -> np.ndarray:
    """Local Lagrange interpolation of ``values`` (or a derivative of it) at ``z``."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    idx = _windows(nodes, z, width)
    w = fornberg_weights(z, nodes[idx], order)[:, order, :]
    return np.einsum("bj,bj->b", w, values[idx])


def extrapolate_to(x0: float, xs, ys) -> float:
    """Polynomial (Richardson-type) extrapolation of samples ``(xs, ys)`` to ``x0``."""
    xs = np.asarray(xs, dtype=float)
    w = fornberg_weights([x0], xs[None, :], 0)[0, 0]
    return float(w @ np.asarray(ys, dtype=float))


def differentiate(samples: SampledFunction, order: int = 1) -> SampledFunction:
    """High-order finite-difference derivative of sampled data.

    A 9-point Fornberg stencil is centred on each node where possible and
    shifted inward near the ends.  Convergence orders are 8, 7 and 6 for
    ``order`` 1, 2 and 3.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")
    nodes = samples.grid.nodes
    if nodes.size < STENCIL:
        raise GridError(f"differentiation needs at least {STENCIL} nodes, got {nodes.size}")
    idx = _windows(nodes, nodes, STENCIL)
    w = fornberg_weights(nodes, nodes[idx], order)[:, order, :]
    return SampledFunction(samples.grid, np.einsum("bj,bj->b", w, samples.values[idx]))


# ---------------------------------------------------------------------------
# root finding and linear algebra


def find_root_bracketed(fn: Callable[[float], float], lo: float, hi: float,
                        tol: float = 1e-12, max_iter: int = 500) -> float:
    """Root of ``fn`` inside a sign-changing bracket.

    Bisection safeguards an Illinois-modified secant step; a bisection is forced
    whenever two consecutive steps fail to halve the bracket.  The iteration is
    deterministic and stops once the bracket is no wider than ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")

    def evaluate(x):
        v = float(fn(x))
        if not math.isfinite(v):
            raise EvaluationError(f"non-finite function value {v} at x={x!r}")
        return v

    a, b = float(lo), float(hi)
    fa, fb = evaluate(a), evaluate(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa < 0) == (fb < 0):
        raise BracketError(f"no sign change on [{a}, {b}]: f={fa:.3e}, {fb:.3e}")
    side = 0
    width = abs(b - a)
    stalls = 0
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if stalls >= 2:
            x = 0.5 * (a + b)
            stalls = 0
        else:
            x = (a * fb - b * fa) / (fb - fa)
            if not (min(a, b) < x < max(a, b)):
                x = 0.5 * (a + b)
        fx = evaluate(x)
        if fx == 0.0:
            return x
        # compare signs, not products: products of tiny values underflow
        if (fx < 0) != (fb < 0):
            a, fa = b, fb
            b, fb = x, fx
            side = 0
        else:
            b, fb = x, fx
            if side == 1:
                fa *= 0.5
            side = 1
        new_width = abs(b - a)
        stalls = stalls + 1 if new_width > 0.5 * width else 0
        width = new_width
    else:
        raise AccuracyError(f"root bracket did not shrink below {tol} in {max_iter} steps")
    # return the endpoint with the smaller residual
    return b if abs(fb) <= abs(fa) else a


def solve_linear(matrix, rhs, max_condition: float = 1e12) -> np.ndarray:
    """Solve a small dense system, refusing ill-conditioned matrices."""
    a = np.asarray(matrix, dtype=float)
    b = np.asarray(rhs, dtype=float)
    n = b.size
    if a.shape != (n, n) or n > 8:
        raise ValueError(f"expected an n x n system with n <= 8, got {a.shape}")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > max_condition:
        raise DegeneracyError(f"matrix condition number {cond:.3e} exceeds {max_condition:.0e}")
    x = np.linalg.solve(a, b)
    resid = np.max(np.abs(a @ x - b))
    if resid > 1e-10 * max(np.max(np.abs(b)), np.finfo(float).tiny):
        raise DegeneracyError(f"linear solve residual {resid:.3e} too large")
    return x


# ---------------------------------------------------------------------------
# double-exponential quadrature

_TAU_MAX = 4.0


def tanh_sinh_rule(level: int, tau_max: float = _TAU_MAX):
    """Tanh-sinh nodes on [-1, 1] at step ``2**-level``.

    Returns ``(left, right, weight)`` where ``left = 1 + x`` and
    ``right = 1 - x`` are computed without cancellation.
    """
    h = 2.0 ** -level
    k = np.arange(-int(round(tau_max / h)), int(round(tau_max / h)) + 1)
    tau = k * h
    u = 0.5 * np.pi * np.sinh(tau)
    e = np.exp(-2.0 * np.abs(u))
    left = np.where(u >= 0, 2.0 / (1.0 + e), 2.0 * e / (1.0 + e))
    right = np.where(u >= 0, 2.0 * e / (1.0 + e), 2.0 / (1.0 + e))
    weight = h * 0.5 * np.pi * np.cosh(tau) * 4.0 * e / (1.0 + e) ** 2
    return left, right, weight


def integrate_endpoint_singular(fn: Callable, a: float, b: float, tol: float = 1e-12,
                                *, offsets: bool = False, max_level: int = 10) -> float:
    """Integrate over ``[a, b]`` with the tanh-sinh transform.

    Integrands may blow up like ``(x - a)**-0.5`` and ``(b - x)**-0.5``.  With
    ``offsets=True`` the integrand is called as ``fn(x, x - a, b - x)`` with the
    two distances computed exactly, which is what keeps the endpoint tails
    accurate; otherwise it is called as ``fn(x)``.

    Raises
    ------
    AccuracyError
        If successive halvings of the step do not agree to ``tol``.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    r = 0.5 * (b - a)
    previous = None
    for level in range(max_level + 1):
        left, right, w = tanh_sinh_rule(level)
        da, db = r * left, r * right
        x = np.where(da <= db, a + da, b - db)
        if offsets:
            keep = (da > 0) & (db > 0)
            vals = np.zeros_like(x)
            vals[keep] = fn(x[keep], da[keep], db[keep])
        else:
            keep = (x > a) & (x < b)
            vals = np.zeros_like(x)
            vals[keep] = fn(x[keep])
        terms = r * w * vals
        if not np.all(np.isfinite(terms)):
            raise EvaluationError("non-finite integrand value inside the interval")
        total = float(np.sum(terms))
        floor = 64 * np.finfo(float).eps * float(np.sum(np.abs(terms)))
        if previous is not None and level >= 3 and abs(total - previous) <= max(tol, floor):
            return total
        previous = total
    raise AccuracyError(f"tanh-sinh quadrature not converged to {tol} at level {max_level}")


# ---------------------------------------------------------------------------
# inversion


def invert_monotone(samples: SampledFunction, n_out: int | None = None,
                    polish: int = 3) -> SampledFunction:
    """Invert strictly monotone samples ``y(x)`` onto a uniform ``y`` grid.

    The inverse is seeded by local interpolation of ``x`` against ``y`` and
    refined with Newton steps on the forward interpolant, so that
    ``y(x(y)) - y`` is at rounding level relative to the range.
    """
    x = samples.grid.nodes
    y = samples.values
    dy = np.diff(y)
    if np.all(dy > 0):
        ys, xs = y, x
    elif np.all(dy < 0):
        ys, xs = y[::-1], x[::-1]
    else:
        raise MonotonicityError("values are not strictly monotone")
    n_out = x.size if n_out is None else int(n_out)
    target = np.linspace(ys[0], ys[-1], n_out)
    xi = interpolate(ys, xs, target)
    xi[0], xi[-1] = xs[0], xs[-1]
    lo, hi = x[0], x[-1]
    for _ in range(polish):
        inner = slice(1, n_out - 1)
        yv = interpolate(x, y, xi[inner])
        slope = interpolate(x, y, xi[inner], order=1)
        step = np.where(slope != 0, (yv - target[inner]) / np.where(slope != 0, slope, 1.0), 0.0)
        xi[inner] = np.clip(xi[inner] - step, lo, hi)
    span = ys[-1] - ys[0]
    resid = np.max(np.abs(interpolate(x, y, xi) - target))
    if resid > 1e-9 * span:
        raise AccuracyError(f"inversion round-trip residual {resid:.3e} exceeds 1e-9 of range")
    return SampledFunction(Grid(target, "uniform"), xi)
