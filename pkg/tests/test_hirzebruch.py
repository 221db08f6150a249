import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from conftest import built
from hermcurv import frame, hirzebruch as H
from hermcurv.errors import DomainError, NoSolutionError, UnsupportedDegreeError
from hermcurv.numerics import SampledFunction, differentiate

# -- ratio polynomials and degree identities ------------------------------------------


def test_chern_polynomial_degree_one():
    poly = H.RatioPolynomial.chern(1)
    np.testing.assert_array_equal(poly.coefficients, [3, -1, -3, -3, -1])
    x = H.chern_ratio_root(1)
    assert abs(poly(x)) <= 1e-12
    assert x == pytest.approx(1.5195, abs=1e-4)
    oracle = max(r.real for r in np.roots(poly.coefficients) if abs(r.imag) < 1e-12)
    assert x == pytest.approx(oracle, abs=1e-13)


def test_chern_polynomial_degree_two_factors():
    # for m = 2 the polynomial is x (4x^3 - 3x^2 - 6x - 5)
    x = H.chern_ratio_root(2)
    assert abs(4 * x**4 - 3 * x**3 - 6 * x**2 - 5 * x) <= 1e-12
    np.testing.assert_array_equal(H.RatioPolynomial.chern(2).coefficients, [4, -3, -6, -5, 0])


@pytest.mark.parametrize("m", [1, 2, 3, 5, 10])
def test_chern_root_is_the_only_one_above_one(m):
    poly = H.RatioPolynomial.chern(m)
    real = [r.real for r in np.roots(poly.coefficients) if abs(r.imag) < 1e-10 and r.real > 1]
    assert len(real) == 1
    assert H.chern_ratio_root(m) == pytest.approx(real[0], rel=1e-13)


@given(st.integers(1, 40))
def test_chern_degree_round_trip(m):
    sol = H.solve_chern(m)
    assert H.chern_degree(sol.phi0, sol.phi1) == pytest.approx(m, rel=1e-10)


def test_third_degree_round_trip():
    sol = H.solve_third(1)
    assert H.third_degree(sol.phi0, sol.phi1) == pytest.approx(1.0, abs=1e-12)
    assert abs(H.RatioPolynomial.third(1)(sol.phi1 / sol.phi0)) <= 1e-9


def test_invalid_degrees():
    with pytest.raises(DomainError):
        H.solve_chern(0)
    with pytest.raises(UnsupportedDegreeError, match="unsupported degree"):
        H.solve_third(2)
    with pytest.raises(NoSolutionError):
        H.solve_critical(2)
    with pytest.raises(DomainError):
        H.solve_chern(1, phi1=-1.0)
    with pytest.raises(ValueError):
        H.solve("kahler", 1)


# -- closed forms -------------------------------------------------------------------


FROZEN = {
    "chern": (1.5195303702881162, 1.0, 9.01545729205025, 6.006182916820101, -1.0010304861366834),
    "third": (1.0, 15.134852944836314, 1.1061928632567024, -6.525076182324398, -3.5516209572720285),
}


@pytest.mark.parametrize("kind", sorted(FROZEN))
def test_frozen_solutions(kind):
    sol = H.solve(kind, 1)
    np.testing.assert_allclose([sol.phi0, sol.phi1, sol.lam, sol.c1, sol.c2], FROZEN[kind],
                               rtol=1e-12)


def test_third_values():
    sol = H.solve_third(1)
    assert sol.phi1 / sol.phi0 == pytest.approx(15.135, abs=1e-3)
    assert (sol.lam, sol.c1, sol.c2) == pytest.approx((1.1062, -6.5251, -3.5516), abs=1e-4)


def test_critical_values():
    sol = H.solve_critical(1)
    assert sol.phi1 / sol.phi0 == pytest.approx(0.15503, abs=1e-5)
    assert sol.lam * sol.phi0**2 == pytest.approx(13.3714, abs=1e-4)
    assert sol.y(sol.phi0, 1) * sol.phi0 == pytest.approx(-10 / 7, rel=1e-9)
    assert sol.y(sol.phi1, 1) * sol.phi1 == pytest.approx(10 / 7, rel=1e-7)
    for v in (sol.lam, sol.c1, sol.c2):
        assert type(v) is float


@pytest.mark.parametrize("m", [1, 2, 3])
def test_chern_ends_and_slopes(m):
    sol = H.solve_chern(m)
    assert abs(sol.y(sol.phi0)) <= 1e-12 and abs(sol.y(sol.phi1)) <= 1e-12
    assert sol.phi0 * sol.y(sol.phi0, 1) == pytest.approx(-4 * m, rel=1e-10)
    assert sol.phi1 * sol.y(sol.phi1, 1) == pytest.approx(4 * m, rel=1e-10)


def test_third_slopes():
    # f = phi'/4 gives f' = y'(phi)/8 at the ends
    sol = H.solve_third(1)
    assert sol.y(sol.phi0, 1) == pytest.approx(8, rel=1e-10)
    assert sol.y(sol.phi1, 1) == pytest.approx(-8, rel=1e-10)


@pytest.mark.parametrize("m", [1, 2, 3, 7])
def test_factored_chern_y(m):
    sol = H.solve_chern(m)
    phi = np.linspace(sol.phi1, sol.phi0, 1000)
    assert np.max(np.abs(sol.y(phi) - H.chern_factored_y(sol, phi))) <= 1e-10


@pytest.mark.parametrize("kind", H.KINDS)
def test_y_between_matches_direct_evaluation(kind):
    sol = H.solve(kind, 1)
    lo, hi = sorted((sol.phi0, sol.phi1))
    phi = np.linspace(lo, hi, 301)[1:-1]
    d0, d1 = np.abs(phi - sol.phi0), np.abs(phi - sol.phi1)
    scale = np.max(np.abs(sol.y(phi)))
    assert np.max(np.abs(sol.y_between(d0, d1) - sol.y(phi))) <= 1e-12 * scale


def test_y_between_keeps_relative_accuracy_at_the_ends():
    sol = H.solve_chern(1)
    d = 1e-13
    near = sol.y_between(d, sol.phi0 - sol.phi1 - d)
    exact = H.chern_factored_y(sol, sol.phi0 - d)
    assert near == pytest.approx(exact, rel=1e-6)


def test_y_rejects_nonpositive_phi():
    with pytest.raises(DomainError):
        H.solve_chern(1).y(0.0)


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("scale", [0.5, 3.0])
def test_scaling(m, scale):
    a, b = H.solve_chern(m), H.solve_chern(m, phi1=scale)
    assert b.phi0 == pytest.approx(scale * a.phi0, rel=1e-14)
    assert b.lam == pytest.approx(a.lam / scale**2, rel=1e-12)
    assert b.c1 == pytest.approx(a.c1 / scale, rel=1e-12)
    assert b.c2 == pytest.approx(a.c2 * scale**4, rel=1e-12)
    assert H.profile_length(b) == pytest.approx(scale * H.profile_length(a), rel=1e-10)


def test_positivity():
    for kind in H.KINDS:
        assert H.positivity_check(H.solve(kind, 1))
    for kind in ("chern", "critical"):
        sol = H.solve(kind, 1)
        assert not H.positivity_check(dataclasses.replace(sol, c2=-sol.c2 - 1.0))
    with pytest.raises(ValueError):
        H.positivity_check(H.solve_chern(1), n_scan=10)


# -- lengths ------------------------------------------------------------------------


def _length_oracle(sol):
    # l = int dphi / sqrt(y); y / ((hi - phi)(phi - lo)) is smooth and positive
    lo, hi = sorted((sol.phi0, sol.phi1))
    if sol.kind == "chern":
        p0, p1, m = sol.phi0, sol.phi1, sol.m

        def smooth(phi):
            big = (phi**4 * (3 * p0**2 + 4 * p1 * p0 + 3 * p1**2)
                   + phi**3 * (p0**3 + p0**2 * p1 + p0 * p1**2 + p1**3)
                   + phi**2 * (p0**3 * p1 + p0**2 * p1**2 + p0 * p1**3)
                   + phi * (p0**3 * p1**2 + p0**2 * p1**3) + p0**3 * p1**3)
            q = 2 * m * big / (phi**4 * (p1 + p0) * (p0 - p1) * (2 * p0**2 + 2 * p1**2 + p0 * p1))
            return 1.0 / math.sqrt(q)
    else:
        def smooth(phi):
            if phi in (lo, hi):
                return math.sqrt(hi - lo) / math.sqrt(abs(sol.y(phi, 1)))
            return 1.0 / math.sqrt(sol.y(phi) / ((hi - phi) * (phi - lo)))
    val, _ = integrate.quad(smooth, lo, hi, weight="alg", wvar=(-0.5, -0.5), epsabs=0,
                            epsrel=1e-13, limit=200)
    return val


@pytest.mark.parametrize("kind, m, rel", [("chern", 1, 1e-11), ("chern", 3, 1e-11),
                                          ("third", 1, 1e-8), ("critical", 1, 1e-8)])
def test_length_matches_reference_quadrature(kind, m, rel):
    sol = H.solve(kind, m)
    assert H.profile_length(sol) == pytest.approx(_length_oracle(sol), rel=rel)


def test_length_table_is_monotone():
    table = H.length_table(H.solve_chern(1), n_pieces=256)
    assert np.all(np.diff(table.t) > 0)
    assert table.t[0] == 0.0
    assert table.length == pytest.approx(H.profile_length(H.solve_chern(1)), rel=1e-12)


# -- profiles -----------------------------------------------------------------------


@pytest.mark.parametrize("kind, m", [("chern", 1), ("chern", 2), ("chern", 3), ("third", 1),
                                     ("critical", 1)])
def test_constructed_profile_has_constant_scalar(kind, m):
    sol, p = built(kind, m)
    report = H.verify_profile(p, sol)
    assert report.constancy <= 1e-6
    assert max(report.boundary.values()) <= 1e-4
    assert report.positive and report.lam > 0
    assert report.passed()


@pytest.mark.parametrize("kind", H.KINDS)
def test_profile_end_values(kind):
    sol, p = built(kind, 1)
    phi = p.meta["phi"]
    assert phi[0] == pytest.approx(sol.phi0, rel=1e-12)
    assert phi[-1] == pytest.approx(sol.phi1, rel=1e-10)
    assert p.l == pytest.approx(H.profile_length(sol), rel=1e-10)


@pytest.mark.parametrize("kind", H.KINDS)
def test_profile_solves_first_order_ode(kind):
    sol, p = built(kind, 1)
    phi = SampledFunction(p.f.grid, p.meta["phi"])
    fd = differentiate(phi, 1).values
    exact = sol.direction * np.sqrt(np.maximum(sol.y(p.meta["phi"]), 0.0))
    assert np.max(np.abs(fd - exact)) <= 1e-7 * np.max(np.abs(exact))


@pytest.mark.parametrize("kind", H.KINDS)
def test_profile_substitution(kind):
    sol, p = built(kind, 1)
    phi, dphi = p.meta["phi"], p.meta["dphi"]
    h_expected = np.sqrt(phi) if kind == "third" else phi
    f_expected = {"chern": -0.5 * phi * dphi, "third": dphi / 4,
                  "critical": -1.4 * phi * dphi}[kind]
    np.testing.assert_allclose(p.h.values, h_expected, rtol=1e-14)
    np.testing.assert_allclose(p.f.values, f_expected, rtol=1e-12, atol=1e-14)


def test_chern_profile_from_samples_alone():
    sol, p = built("chern", 1)
    q = frame.ProfilePair.from_samples(p.t, p.f.values, p.h.values, m=1)
    t = q.t[4:-4]
    s = frame.chern_scalar(q, t)
    assert np.max(np.abs(s - sol.lam)) / sol.lam <= 1e-6


def test_defining_scalar_selects_the_right_combination():
    sol, p = built("critical", 1)
    t = p.interior[::17]
    np.testing.assert_array_equal(H.defining_scalar(p, "critical", t),
                                  frame.gauduchon_combination(p, t))
    with pytest.raises(ValueError):
        H.defining_scalar(p, "mystery", t)


def test_build_profile_rejects_bad_input():
    sol = H.solve_chern(1)
    with pytest.raises(ValueError):
        H.build_profile(sol, n_grid=16)
    broken = dataclasses.replace(sol, c2=-sol.c2 - 1.0)
    with pytest.raises(Exception):
        H.build_profile(broken)


def test_large_degree_profile():
    sol, p = built("chern", 10)
    report = H.verify_profile(p, sol)
    assert report.constancy <= 1e-6
    assert max(report.boundary.values()) <= 1e-4
