import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_morrey.jacobi_core import JacobiParams, jacobi_function
from jacobi_morrey.quadrature import (
    QuadratureRule,
    SampledFunction,
    StepFunction,
    composite_rule,
    default_order,
    gauss_jacobi_rule,
    hilbert_on_grid,
    hilbert_transform,
    integrate,
    pv_hilbert,
)


def legendre_moment(j):
    return Fraction(2, j + 1) if j % 2 == 0 else Fraction(0)


def jacobi_moment(a, b, k):
    """int_{-1}^1 x^k (1-x)^a (1+x)^b dx by binomial expansion against Beta integrals."""
    with mpmath.workdps(90):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        s = mpmath.mpf(0)
        for j in range(k + 1):
            s += mpmath.binomial(k, j) * 2**j * (-1) ** (k - j) * mpmath.beta(j + b + 1, a + 1)
        return float(2 ** (a + b + 1) * s)


def test_small_legendre_rules():
    r1 = gauss_jacobi_rule(0, 0, 1)
    np.testing.assert_allclose(r1.nodes, [0.0], atol=1e-16)
    np.testing.assert_allclose(r1.weights, [2.0], rtol=1e-15)
    r2 = gauss_jacobi_rule(0, 0, 2)
    np.testing.assert_allclose(r2.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
    np.testing.assert_allclose(r2.weights, [1.0, 1.0], rtol=1e-15)


def test_weighted_rule_moments_against_binomial_oracle():
    rule = gauss_jacobi_rule(1.0, 0.0, 8)
    for k in range(16):
        exact = float(legendre_moment(k) - legendre_moment(k + 1))
        assert abs(np.dot(rule.weights, rule.nodes**k) - exact) <= 1e-13


@pytest.mark.parametrize("a,b,m", [(0.0, 0.0, 5), (0.5, 0.5, 12), (2.5, 0.25, 20), (-0.5, 1.25, 9), (1.0, 3.0, 33)])
def test_gauss_exactness(a, b, m):
    rule = gauss_jacobi_rule(a, b, m)
    assert rule.weight_exponents == (a, b)
    for k in range(2 * m):
        exact = jacobi_moment(a, b, k)
        scale = jacobi_moment(a, b, 0)
        got = np.dot(rule.weights, rule.nodes**k)
        assert abs(got - exact) <= 1e-12 * max(abs(exact), 1e-3 * scale)


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.95, 5.0), st.floats(-0.95, 5.0), st.integers(1, 200))
def test_rule_invariants(a, b, m):
    rule = gauss_jacobi_rule(a, b, m)
    assert len(rule) == m
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(np.abs(rule.nodes) < 1) and np.all(rule.weights > 0)
    mu0 = 2 ** (a + b + 1) * math.exp(math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2))
    np.testing.assert_allclose(rule.weights.sum(), mu0, rtol=1e-11)


def test_rule_validation():
    with pytest.raises(ValueError):
        gauss_jacobi_rule(-1.0, 0.0, 4)
    with pytest.raises(ValueError):
        gauss_jacobi_rule(0.0, 0.0, 0)
    with pytest.raises(ValueError):
        QuadratureRule([0.1, -0.1], [1.0, 1.0])
    with pytest.raises(ValueError):
        QuadratureRule([-0.1, 0.1], [1.0, -1.0])


def test_default_order():
    assert default_order(0) == 64
    assert default_order(10) == 104


def test_integrate_examples():
    leg = gauss_jacobi_rule(0, 0, 4)
    assert integrate(lambda x: np.ones_like(x), leg) == pytest.approx(2.0, rel=1e-15)
    P = JacobiParams(0, 0)
    assert integrate(lambda x: jacobi_function(P, 3, x) ** 2, leg) == pytest.approx(1.0, rel=1e-14)
    assert integrate(lambda x: x**2, gauss_jacobi_rule(0, 0, 2)) == pytest.approx(2 / 3, rel=1e-15)


def test_integrate_sampled_refuses_extrapolation():
    f = SampledFunction(np.linspace(-0.5, 0.5, 11), np.ones(11))
    with pytest.raises(ValueError, match="outside its grid hull"):
        integrate(f, gauss_jacobi_rule(0, 0, 8))
    g = SampledFunction(np.linspace(-0.999, 0.999, 5), np.full(5, 3.0))
    assert integrate(g, gauss_jacobi_rule(0, 0, 2)) == pytest.approx(6.0)


def test_sampled_function_invariants():
    with pytest.raises(ValueError):
        SampledFunction([-1.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        SampledFunction([0.0, 0.0, 0.5], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        StepFunction([0.0, 0.5], [1.0, 2.0])


def test_composite_rule_with_weight():
    nodes, weights = composite_rule([-1.0, -0.3, 0.2, 0.7, 1.0], 10, 0.75, 1.5)
    for k in range(6):
        np.testing.assert_allclose(np.dot(weights, nodes**k), jacobi_moment(0.75, 1.5, k), rtol=1e-12, atol=1e-14)


def test_pv_hilbert_closed_forms():
    assert pv_hilbert(lambda t: np.ones_like(t), 0.5) == pytest.approx(math.log(3), abs=1e-12)
    assert pv_hilbert(lambda t: t, 0.5) == pytest.approx(-2 + 0.5 * math.log(3), abs=1e-12)
    assert abs(pv_hilbert(lambda t: t * t, 0.0)) < 1e-14


def test_pv_hilbert_domain():
    with pytest.raises(ValueError):
        pv_hilbert(np.cos, 1.0)
    with pytest.raises(ValueError):
        pv_hilbert(np.cos, -1 + 1e-15)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_pv_hilbert_converges(k):
    x = np.linspace(-0.9, 0.9, 37)
    L = np.log((1 + x) / (1 - x))
    exact = {0: L, 1: -2 + x * L, 2: -2 * x + x * x * L}[k]
    errs = [np.max(np.abs(pv_hilbert(lambda t: t**k, x, m) - exact)) for m in (1, 2, 4, 8, 16, 32)]
    for e0, e1 in zip(errs, errs[1:]):
        assert e1 <= max(e0 / 4, 1e-10)
    assert errs[-1] <= 1e-10


def test_pv_hilbert_smooth_nonpolynomial():
    # H(exp) against a dense singularity-subtracted mpmath oracle at one point
    x0 = 0.3
    with mpmath.workdps(25):
        f = lambda t: (mpmath.exp(t) - mpmath.exp(x0)) / (x0 - t)  # noqa: E731
        ref = mpmath.quad(f, [-1, x0, 1]) + mpmath.exp(x0) * mpmath.log((1 + x0) / (1 - x0))
    assert pv_hilbert(np.exp, x0, 32) == pytest.approx(float(ref), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.95, 0.95), st.floats(0.1, 3.0))
def test_even_functions_have_odd_transforms(x, c):
    f = lambda t: np.cos(c * t) + t**4  # noqa: E731
    assert pv_hilbert(f, -x) == pytest.approx(-pv_hilbert(f, x), abs=1e-10)


def test_hilbert_on_grid_constant():
    grid = np.linspace(-0.99, 0.99, 51)
    f = SampledFunction(grid, np.full(grid.size, 2.5))
    x = np.linspace(-0.999, 0.999, 301)
    np.testing.assert_allclose(hilbert_on_grid(f, x).values, 2.5 * np.log((1 + x) / (1 - x)), atol=1e-12)


def test_hilbert_on_grid_linear_is_exact_on_interpolant():
    # f(t) = t on the grid hull, constant beyond it; compare with a direct split integral
    g = np.linspace(-0.8, 0.8, 9)
    f = SampledFunction(g, g.copy())
    x0 = 0.33
    with mpmath.workdps(25):
        fm = lambda t: min(max(t, -0.8), 0.8)  # noqa: E731
        ref = mpmath.quad(lambda t: (fm(t) - fm(x0)) / (x0 - t), [-1, -0.8, x0, 0.8, 1])
        ref += fm(x0) * mpmath.log((1 + x0) / (1 - x0))
    assert hilbert_transform(f, x0) == pytest.approx(float(ref), abs=1e-12)


def test_hilbert_of_indicator_closed_form():
    r = 0.4
    chi = StepFunction.indicator(0.0, r)
    x = np.array([-0.7, -0.2, 0.6, 0.9])
    exact = np.log(np.abs(x)) - np.log(np.abs(x - r))
    np.testing.assert_allclose(hilbert_on_grid(chi, x).values, exact, atol=1e-14)
    np.testing.assert_allclose(hilbert_transform(chi, x), exact, atol=1e-14)


def test_hilbert_linearity():
    rng = np.random.default_rng(3)
    g = np.sort(rng.uniform(-0.98, 0.98, 40))
    a, b = rng.normal(size=40), rng.normal(size=40)
    x = np.linspace(-0.95, 0.95, 77)
    Hs = hilbert_on_grid(SampledFunction(g, a + b), x).values
    Ha = hilbert_on_grid(SampledFunction(g, a), x).values
    Hb = hilbert_on_grid(SampledFunction(g, b), x).values
    np.testing.assert_allclose(Hs, Ha + Hb, atol=1e-12)


def test_hilbert_dispatch_callable():
    assert hilbert_transform(lambda t: t, 0.5) == pytest.approx(-2 + 0.5 * math.log(3), abs=1e-12)
    with pytest.raises(TypeError):
        hilbert_on_grid(np.exp, [0.0])
