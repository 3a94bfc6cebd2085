import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_morrey.morrey import (
    DEFAULT_SCAN,
    BallScan,
    MorreyExponents,
    PowerWeight,
    ScanSpec,
    dual_functional,
    lp_norm,
    morrey_norm,
    morrey_norm_estimate,
    weighted_morrey_norm,
)
from jacobi_morrey.quadrature import StepFunction, gauss_jacobi_rule

SMALL_SCAN = ScanSpec(32, 16)


def ball_power(nu, x0, r0):
    """|x - x0|^nu on B(x0, r0), zero elsewhere, with its break points."""

    def f(x):
        x = np.asarray(x, dtype=float)
        d = np.abs(x - x0)
        with np.errstate(divide="ignore"):
            return np.where(d <= r0, d**nu, 0.0)

    return f, [x0 - r0, x0, x0 + r0]


def test_exponent_validation():
    with pytest.raises(ValueError, match="lambda < 1"):
        MorreyExponents(2.0, 1.2)
    with pytest.raises(ValueError):
        MorreyExponents(0.5, 0.0)
    with pytest.raises(ValueError):
        MorreyExponents(math.inf, 0.0)
    e = MorreyExponents(1.0, 0.3)
    assert e.q == math.inf and not e.conjugate_finite
    assert MorreyExponents(4.0).q == pytest.approx(4 / 3)


def test_weight_and_scan_validation():
    with pytest.raises(ValueError):
        PowerWeight((0.5, 0.2), (1.0, 1.0))
    with pytest.raises(ValueError):
        PowerWeight((1.5,), (1.0,))
    with pytest.raises(ValueError):
        PowerWeight((0.0,), ())
    with pytest.raises(ValueError):
        ScanSpec(4, 28)
    with pytest.raises(ValueError):
        ScanSpec(64, 2)
    with pytest.raises(ValueError):
        ScanSpec(64, 28, 0.5)
    assert len(PowerWeight.endpoints(0.25, -0.25)) == 2


def test_refined_scan_contains_original_balls():
    s = ScanSpec(16, 8)
    r = s.refined()
    assert set(s.radii) <= set(r.radii)
    assert set(s.centers()) <= set(r.centers())


def test_constant_function():
    one = lambda x: np.ones_like(x)  # noqa: E731
    assert morrey_norm(one, MorreyExponents(2.0, 0.0)) == pytest.approx(math.sqrt(2), rel=1e-13)


@pytest.mark.parametrize("p,lam", [(1.0, 0.3), (2.0, 0.5), (4.0, 0.25)])
def test_whole_interval_lower_bound(p, lam):
    f = lambda x: np.exp(x) * np.sin(3 * x)  # noqa: E731
    rule = gauss_jacobi_rule(0, 0, 80)
    lp = np.dot(rule.weights, np.abs(f(rule.nodes)) ** p) ** (1 / p)
    assert morrey_norm(f, MorreyExponents(p, lam), breakpoints=[0.0]) >= 2 ** (-lam / p) * lp * (1 - 1e-12)


@pytest.mark.parametrize("f", [np.exp, np.cos, lambda x: 1 + x**3])
@pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
def test_lambda_zero_is_lp(f, p):
    rule = gauss_jacobi_rule(0, 0, 80)
    ref = np.dot(rule.weights, np.abs(f(rule.nodes)) ** p) ** (1 / p)
    assert morrey_norm(f, MorreyExponents(p, 0.0)) == pytest.approx(ref, rel=1e-2)
    assert lp_norm(f, p) == pytest.approx(ref, rel=1e-2)


@pytest.mark.parametrize("nu", [-0.2, 0.0, 0.5])
@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_ball_power_scaling(nu, lam):
    p = 2.0
    assert nu * p >= lam - 1
    ratios = []
    for j in range(1, 7):
        r0 = 2.0**-j
        f, bps = ball_power(nu, 0.1, r0)
        ratios.append(morrey_norm(f, MorreyExponents(p, lam), breakpoints=bps) / (2 * r0) ** ((1 + nu * p - lam) / p))
    assert max(ratios) / min(ratios) <= 2.0


def test_ball_power_refinement_monotone_and_stable():
    f, bps = ball_power(-0.2, 0.1, 1 / 16)
    e = MorreyExponents(2.0, 0.5)
    scan = DEFAULT_SCAN
    vals = []
    for _ in range(3):
        vals.append(morrey_norm(f, e, scan, bps))
        scan = scan.refined()
    assert vals[1] >= vals[0] and vals[2] >= vals[1]
    assert abs(vals[2] - vals[1]) <= 0.02 * vals[2]
    a, b, rel = morrey_norm_estimate(f, e, DEFAULT_SCAN, bps)
    assert b >= a and rel <= 0.02


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(-0.9, 0.9), st.floats(-2.0, 2.0))
def test_refinement_never_decreases(freq, shift, c):
    f = lambda x: np.sin(freq * np.pi * x + shift) + c  # noqa: E731
    e = MorreyExponents(2.5, 0.4)
    # the refined partition changes each ball integral at quadrature-error level
    assert morrey_norm(f, e, SMALL_SCAN.refined()) >= morrey_norm(f, e, SMALL_SCAN) * (1 - 1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(1e-30, 50.0) | st.floats(-50.0, -1e-30) | st.just(0.0), st.floats(1.0, 6.0), st.floats(0.0, 0.9))
def test_homogeneity(c, p, lam):
    f = lambda x: np.exp(x) - 0.5  # noqa: E731
    e = MorreyExponents(p, lam)
    base = morrey_norm(f, e, SMALL_SCAN)
    scaled = morrey_norm(lambda x: c * f(x), e, SMALL_SCAN)
    assert scaled == pytest.approx(abs(c) * base, rel=1e-13, abs=1e-300)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 4.0), st.floats(-1.0, 1.0), st.floats(0.5, 4.0), st.floats(-1.0, 1.0))
def test_triangle_inequality(a, s, b, t):
    f = lambda x: np.cos(a * x + s)  # noqa: E731
    g = lambda x: t * np.exp(b * x) * x  # noqa: E731
    e = MorreyExponents(3.0, 0.3)
    lhs = morrey_norm(lambda x: f(x) + g(x), e, SMALL_SCAN)
    assert lhs <= morrey_norm(f, e, SMALL_SCAN) + morrey_norm(g, e, SMALL_SCAN) + 1e-12


@pytest.mark.parametrize("nu", [-0.4, -0.2, 0.3])
def test_embedding_ordering(nu):
    # ||f||_{r,mu} finite implies ||f||_{p,lam} finite for p <= r, lam <= mu
    big = MorreyExponents(2.0, 0.5)
    small = MorreyExponents(1.5, 0.2)
    for j in (2, 4, 6):
        f, bps = ball_power(nu, -0.3, 2.0**-j)
        nb = morrey_norm(f, big, breakpoints=bps)
        ns = morrey_norm(f, small, breakpoints=bps)
        assert math.isfinite(nb) and math.isfinite(ns)
        # Hoelder on each ball gives the comparison with constant 1 times a radius factor
        assert ns <= 2 ** (0.5 / 1.5) * nb


def test_step_function_norm():
    chi = StepFunction.indicator(0.0, 0.25)
    # sup of r^-lam |B cap (0, 1/4)| is attained by the ball hugging the interval
    e = MorreyExponents(2.0, 0.5)
    assert morrey_norm(chi, e) == pytest.approx(math.sqrt(0.125**-0.5 * 0.25), rel=1e-12)


def test_dual_functional_basics():
    e = MorreyExponents(2.0, 0.5)
    assert dual_functional(lambda x: np.zeros_like(x), e) == 0.0
    with pytest.raises(ValueError):
        dual_functional(np.cos, MorreyExponents(1.0, 0.2))
    # |g|^q not integrable near 1
    bad = lambda x: (1 - np.asarray(x)) ** -0.6  # noqa: E731
    assert dual_functional(bad, e) == math.inf
    border = lambda x: (1 + np.asarray(x)) ** -0.5  # noqa: E731
    assert dual_functional(border, e) == math.inf
    inner = lambda x: np.abs(np.asarray(x) - 0.3) ** -0.7  # noqa: E731
    assert dual_functional(inner, e, breakpoints=[0.3]) == math.inf
    ok = lambda x: (1 - np.asarray(x)) ** -0.45  # noqa: E731
    assert math.isfinite(dual_functional(ok, e))
    v = dual_functional(np.cos, e)
    assert math.isfinite(v) and v > 0


def test_dual_functional_reflection():
    e = MorreyExponents(1.7, 0.3)
    f = lambda x: np.exp(2 * x)  # noqa: E731
    g = lambda x: np.exp(-2 * np.asarray(x))  # noqa: E731
    assert dual_functional(f, e) == pytest.approx(dual_functional(g, e), rel=1e-10)


def test_hoelder_pairing():
    rng = np.random.default_rng(2024)
    e = MorreyExponents(2.0, 0.5)
    rule = gauss_jacobi_rule(0, 0, 200)
    scan = BallScan(DEFAULT_SCAN)
    ratios = []
    for _ in range(50):
        c1, c2 = rng.normal(size=4), rng.normal(size=4)
        a = rng.uniform(0.5, 4.0, 2)
        f = lambda x, c1=c1, a=a: c1[0] + c1[1] * np.sin(a[0] * x + c1[2]) + c1[3] * x**2  # noqa: E731
        g = lambda x, c2=c2, a=a: c2[0] + c2[1] * np.cos(a[1] * x + c2[2]) + c2[3] * x**3  # noqa: E731
        lhs = np.dot(rule.weights, np.abs(f(rule.nodes) * g(rule.nodes)))
        ratios.append(lhs / (morrey_norm(f, e, ball_scan=scan) * dual_functional(g, e, ball_scan=scan)))
    ratios = np.array(ratios)
    # one constant, fitted on half the family, covers the other half
    C = ratios[:25].max()
    assert np.all(ratios[25:] <= 2 * C)
    assert np.all(ratios <= 1.0)


def test_weighted_norm_examples():
    e = MorreyExponents(2.0, 0.0)
    f = lambda x: np.exp(x)  # noqa: E731
    assert weighted_morrey_norm(f, PowerWeight(), e) == pytest.approx(morrey_norm(f, e), rel=1e-12)
    one = lambda x: np.ones_like(x)  # noqa: E731
    w = PowerWeight((1.0,), (0.25,))
    # int (1-x)^(1/2) dx = (2/3) 2^(3/2)
    assert weighted_morrey_norm(one, w, e) == pytest.approx(math.sqrt(2 ** 1.5 * 2 / 3), rel=1e-6)


def test_borderline_weight_diverges_under_refinement():
    one = lambda x: np.ones_like(x)  # noqa: E731
    w = PowerWeight.endpoints(-0.25, -0.25)
    e = MorreyExponents(4.0, 0.0)
    vals = [weighted_morrey_norm(one, w, e, ScanSpec(64, L)) for L in (8, 16, 24, 32)]
    # |w|^4 = 1 / (1 - x^2): each refinement adds a fixed logarithmic amount to the fourth power
    inc = np.diff(np.array(vals) ** 4)
    assert np.all(inc > 0.5 * inc[0])
