import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import built
from hermcurv import conformal as C, frame
from hermcurv.errors import DomainError
from hermcurv.numerics import Grid, SampledFunction


def sampled(fn, p):
    return SampledFunction(p.f.grid, fn(p.t))


def generic_factor(p):
    # fixed smooth, non-polynomial exponent
    a, b, k = 0.07, 0.03, 2.3 / p.l

    def u(t, order):
        return [a * np.cos(k * t) + b * t * t, -a * k * np.sin(k * t) + 2 * b * t,
                -a * k * k * np.cos(k * t) + 2 * b][order]

    return C.ConformalFactor.from_function(u, p.t)


# -- rescaling ------------------------------------------------------------------------


def test_identity_rescale(corpus):
    p = corpus[2]
    q = C.conformal_rescale_profile(p, C.ConformalFactor.constant(0.0, p.t))
    np.testing.assert_allclose(q.t, p.t, atol=1e-13)
    for a, b in ((q.f, p.f), (q.h, p.h), (q.f1, p.f1), (q.h2, p.h2)):
        np.testing.assert_allclose(a.values, b.values, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("c", [-0.5, 0.3])
def test_homothety(corpus, c):
    p = corpus[5]
    q = C.conformal_rescale_profile(p, C.ConformalFactor.constant(c, p.t))
    assert q.l == pytest.approx(np.exp(c) * p.l, rel=1e-13)
    np.testing.assert_allclose(q.f.values, np.exp(c) * p.f.values, rtol=1e-10)
    np.testing.assert_allclose(q.h1.values, p.h1.values, rtol=1e-9, atol=1e-12)
    t = p.t[10:-10:20]
    np.testing.assert_allclose(frame.chern_scalar(q, np.exp(c) * t),
                               np.exp(-2 * c) * frame.chern_scalar(p, t), rtol=1e-8)
    assert C.volume(q) == pytest.approx(np.exp(4 * c) * C.volume(p), rel=1e-10)


def test_rescaled_jet_chain_rule():
    j = frame.Jet(*(np.array([v]) for v in (1.3, 0.2, -0.4, 2.0, 0.5, 0.1)))
    r = C.rescaled_jet(j, 0.0, 0.0, 0.0)
    assert r == j
    r = C.rescaled_jet(j, np.log(2.0), 0.0, 0.0)
    assert (r.f[0], r.f1[0], r.f2[0]) == pytest.approx((2.6, 0.2, -0.2))


def test_rescale_requires_matching_grid(hopf):
    u = C.ConformalFactor.constant(0.1, np.linspace(0, 2, hopf.t.size))
    with pytest.raises(DomainError):
        C.conformal_rescale_profile(hopf, u)


def test_arclength_of_linear_factor(hopf):
    eps = 0.3
    tt = C.rescaled_arclength(hopf, C.ConformalFactor.linear(eps, hopf.t))
    np.testing.assert_allclose(tt, np.expm1(eps * hopf.t) / eps, rtol=1e-14, atol=1e-16)


# -- covariance ------------------------------------------------------------------------


def test_covariance_constant_factor(corpus):
    p = corpus[1]
    t = p.t[20:-20:25]
    lhs, rhs = C.gauduchon_conformal_covariance(p, C.ConformalFactor.constant(0.4, p.t), t)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9)
    np.testing.assert_allclose(rhs, frame.gauduchon_combination(p, t), rtol=1e-14)


def test_covariance_on_hopf_linear_factor(hopf):
    u = C.ConformalFactor.linear(0.01, hopf.t)
    t = hopf.t[5:-5:4]
    lhs, rhs = C.gauduchon_conformal_covariance(hopf, u, t)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10
    np.testing.assert_allclose(rhs, 4 - 4 * 0.01**2, rtol=1e-14)


@pytest.mark.parametrize("index", [0, 3, 7])
def test_covariance_generic_on_corpus(corpus, index):
    p = corpus[index]
    t = p.t[20:-20:13]
    lhs, rhs = C.gauduchon_conformal_covariance(p, generic_factor(p), t)
    assert np.max(np.abs(lhs - rhs)) <= 1e-7 * max(1.0, np.max(np.abs(rhs)))


def test_covariance_on_critical_profile():
    sol, p = built("critical", 1)
    t = p.t[16:-16:7]
    lhs, rhs = C.gauduchon_conformal_covariance(p, generic_factor(p), t)
    assert np.max(np.abs(lhs - rhs)) <= 1e-7 * max(1.0, np.max(np.abs(rhs)))


# -- Yamabe-type equation and functional ---------------------------------------------------


def test_yamabe_constant_factor_on_critical_profile():
    sol, p = built("critical", 1)
    one = sampled(np.ones_like, p)
    # f'/f ~ 1/t amplifies the rounding in the derivative of a constant at the last nodes
    res = C.yamabe_residual(p, one, sol.lam, p.t[8:-8])
    assert np.max(np.abs(res)) <= 1e-10 * sol.lam


def test_yamabe_nonconstant_on_hopf(hopf):
    phi = sampled(lambda t: 1 + 0.1 * t * t, hopf)
    t = hopf.t[4:-4]
    v = 1 + 0.1 * t * t
    np.testing.assert_allclose(C.yamabe_residual(hopf, phi, 2.5, t), 2.5 * v**3 - 4 * v + 0.8,
                               rtol=1e-9)


def test_yamabe_rejects_nonpositive(hopf):
    with pytest.raises(DomainError):
        C.yamabe_residual(hopf, sampled(lambda t: t - 0.5, hopf), 1.0, hopf.t[1:-1])


def test_volume_of_hopf_piece(hopf):
    assert C.volume(hopf) == pytest.approx(hopf.l, rel=1e-14)


def test_functional_at_constant_factor():
    sol, p = built("critical", 1)
    e1 = C.functional_E(p, sampled(np.ones_like, p))
    assert e1 == pytest.approx(sol.lam * np.sqrt(C.volume(p)), rel=1e-8)


@given(st.floats(0.05, 20.0))
def test_functional_is_scale_invariant(c):
    p = frame.kahler_profile(n=128)
    phi = sampled(lambda t: 1.2 + 0.3 * np.sin(2 * t), p)
    scaled = SampledFunction(phi.grid, c * phi.values)
    assert C.functional_E(p, scaled) == pytest.approx(C.functional_E(p, phi), rel=1e-12)


def test_functional_scale_invariance_by_seven():
    sol, p = built("chern", 1)
    phi = sampled(lambda t: 1 + 0.2 * t, p)
    seven = SampledFunction(phi.grid, 7 * phi.values)
    assert C.functional_E(p, seven) == pytest.approx(C.functional_E(p, phi), rel=1e-13)


def test_first_variation_vanishes_at_solution():
    sol, p = built("critical", 1)
    one = sampled(np.ones_like, p)
    for psi in (lambda t: np.cos(np.pi * t / p.l), lambda t: t * (p.l - t), lambda t: np.exp(-t)):
        assert abs(C.first_variation(p, one, sampled(psi, p))) <= 1e-5


def test_first_variation_detects_non_solutions():
    sol, p = built("critical", 1)
    phi = sampled(lambda t: 1 + 0.3 * t, p)
    assert abs(C.first_variation(p, phi, sampled(np.ones_like, p))) > 1e-3


def test_functional_rejects_nonpositive(hopf):
    with pytest.raises(DomainError):
        C.functional_E(hopf, sampled(lambda t: t - 0.5, hopf))


def test_conformal_factor_from_samples():
    grid = Grid.uniform(0, 1, 64)
    u = C.ConformalFactor.from_samples(SampledFunction(grid, np.sin(grid.nodes)))
    np.testing.assert_allclose(u(grid.nodes, 2), -np.sin(grid.nodes), atol=1e-7)
