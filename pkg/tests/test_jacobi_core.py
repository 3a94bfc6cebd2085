import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from jacobi_morrey.expansion import chebyshev_grid
from jacobi_morrey.jacobi_core import (
    JacobiFunction,
    JacobiParams,
    check_degree,
    endpoint_bound_check,
    hilb_envelope,
    jacobi_function,
    jacobi_poly,
    jacobi_roots,
    normalization_constant,
    orthonormal_table,
)
from jacobi_morrey.quadrature import gauss_jacobi_rule

PARAM_GRID = [(a, b) for a in (0.0, 0.5, 1.0, 2.5) for b in (0.0, 0.5, 1.0, 2.5)]


def hyp_oracle(alpha, beta, n, x):
    """P_n via the terminating 2F1 series, in 30-digit arithmetic."""
    with mpmath.workdps(30):
        c = mpmath.binomial(n + alpha, n)
        return float(c * mpmath.hyp2f1(-n, n + alpha + beta + 1, alpha + 1, (1 - mpmath.mpf(x)) / 2))


def test_params_validation():
    with pytest.raises(ValueError):
        JacobiParams(-1.0, 0.0)
    with pytest.raises(ValueError):
        JacobiParams(0.0, -1.5)
    assert JacobiParams(0.0, 2.0).nonnegative
    assert not JacobiParams(-0.5, 0.0).nonnegative


def test_degree_validation():
    for bad in (-1, 2.5, True):
        with pytest.raises(ValueError):
            check_degree(bad)
    assert check_degree(np.int64(7)) == 7


def test_low_degree_closed_forms():
    P = JacobiParams(0.0, 0.0)
    assert jacobi_poly(P, 0, 0.7) == 1.0
    np.testing.assert_allclose(jacobi_poly(P, 1, 0.3), 0.3, rtol=0, atol=1e-15)
    Q = JacobiParams(1.3, 0.4)
    x = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(jacobi_poly(Q, 1, x), (Q.alpha + 1) + (Q.alpha + Q.beta + 2) * (x - 1) / 2, rtol=1e-14)


def test_value_at_one_against_series():
    assert hyp_oracle(1, 0, 3, 1.0) == pytest.approx(4.0)
    np.testing.assert_allclose(jacobi_poly(JacobiParams(1, 0), 3, 1.0), 4.0, rtol=1e-14)


@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (0.5, 1.0), (2.5, 0.5), (-0.5, 0.3)])
def test_recurrence_matches_hypergeometric_series(alpha, beta):
    rng = np.random.default_rng(11)
    P = JacobiParams(alpha, beta)
    for n in (2, 3, 7, 16, 41, 100, 157, 200):
        x = rng.uniform(-1, 1, 25)
        got = jacobi_poly(P, n, x)
        ref = np.array([hyp_oracle(alpha, beta, n, xi) for xi in x])
        np.testing.assert_allclose(got, ref, rtol=1e-9)


def test_strict_domain():
    P = JacobiParams(0.0, 0.0)
    with pytest.raises(ValueError):
        jacobi_poly(P, 3, 1.1)
    # relaxed mode tolerates node jitter only
    jacobi_poly(P, 3, 1.0 + 5e-13, strict=False)
    with pytest.raises(ValueError):
        jacobi_poly(P, 3, 1.0 + 1e-9, strict=False)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(-0.9, 4.0),
    st.floats(-0.9, 4.0),
    st.integers(0, 60),
    st.floats(-1.0, 1.0),
)
def test_reflection_symmetry(alpha, beta, n, x):
    lhs = jacobi_poly(JacobiParams(alpha, beta), n, -x)
    rhs = (-1) ** n * jacobi_poly(JacobiParams(beta, alpha), n, x)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10 * max(1.0, abs(rhs)))


def test_normalization_examples():
    P = JacobiParams(0.0, 0.0)
    np.testing.assert_allclose(normalization_constant(P, 0), 1 / math.sqrt(2), rtol=1e-15)
    np.testing.assert_allclose(normalization_constant(P, 5), math.sqrt(11 / 2), rtol=1e-14)


@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (0.5, 2.5), (2.5, 1.0), (-0.4, 0.7)])
def test_normalization_against_quadrature(alpha, beta):
    # independent oracle: scipy's Gauss-Jacobi rule and polynomial values
    x, w = special.roots_jacobi(160, alpha, beta)
    P = JacobiParams(alpha, beta)
    for n in (0, 1, 2, 10, 37, 100):
        integral = np.sum(w * special.eval_jacobi(n, alpha, beta, x) ** 2)
        np.testing.assert_allclose(normalization_constant(P, n), integral**-0.5, rtol=1e-10)


@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (2.5, 0.5)])
def test_normalization_grows_like_sqrt_n(alpha, beta):
    P = JacobiParams(alpha, beta)
    ratios = [normalization_constant(P, n) / math.sqrt(n) for n in (64, 128, 512, 1024, 4096)]
    assert max(ratios) / min(ratios) < 1.05


def test_jacobi_function_examples():
    P = JacobiParams(0.0, 0.0)
    np.testing.assert_allclose(jacobi_function(P, 0, np.array([-0.3, 0.0, 0.9])), 1 / math.sqrt(2), rtol=1e-15)
    direct = normalization_constant(P, 7) * jacobi_poly(P, 7, 0.25)
    assert abs(jacobi_function(P, 7, 0.25) - direct) <= 1e-12


def test_endpoint_limits():
    assert jacobi_function(JacobiParams(1.0, 0.0), 6, 1.0) == 0.0
    assert jacobi_function(JacobiParams(0.0, 0.5), 6, -1.0) == 0.0
    P = JacobiParams(0.0, 0.0)
    np.testing.assert_allclose(jacobi_function(P, 6, 1.0), normalization_constant(P, 6), rtol=1e-14)


def test_large_degree_normalized_branch_is_continuous():
    # the orthonormal recurrence takes over above the threshold
    P = JacobiParams(0.5, 1.5)
    x = np.linspace(-0.95, 0.95, 7)
    a = jacobi_function(P, 9_999, x)
    b = jacobi_function(P, 10_001, x)
    assert np.all(np.isfinite(a)) and np.all(np.isfinite(b))
    assert np.max(np.abs(b)) < 3.0


@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (1.0, 2.5), (2.5, 0.5)])
def test_orthonormality_small(alpha, beta):
    P = JacobiParams(alpha, beta)
    N = 40
    rule = gauss_jacobi_rule(alpha, beta, N + 2)
    T = orthonormal_table(P, N, rule.nodes)
    G = (T * rule.weights) @ T.T
    np.testing.assert_allclose(G, np.eye(N + 1), atol=1e-12)


def test_roots_interlace_and_vanish():
    P = JacobiParams(2.5, 0.5)
    for n in (1, 5, 64, 300):
        r = jacobi_roots(P, n)
        assert r.size == n and np.all(np.diff(r) > 0) and np.all(np.abs(r) < 1)
        scale = np.max(np.abs(jacobi_poly(P, n, np.linspace(-1, 1, 2001))))
        assert np.max(np.abs(jacobi_poly(P, n, r))) < 1e-10 * scale
    np.testing.assert_allclose(jacobi_roots(JacobiParams(0, 0), 2), [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-14)


def test_jacobi_function_object():
    P = JacobiParams(2.5, 0.5)
    f = JacobiFunction(P, 9)
    x = np.linspace(-0.9, 0.9, 13)
    np.testing.assert_allclose(f(x), jacobi_function(P, 9, x))
    hw = (1 - x) ** 1.25 * (1 + x) ** 0.25
    np.testing.assert_allclose(f.smooth(x) * hw, f(x), rtol=1e-13, atol=1e-14)
    assert f.endpoint_exponents == (1.25, 0.25)
    np.testing.assert_allclose(f.breakpoints, jacobi_roots(P, 9))


def test_hilb_envelope_examples():
    np.testing.assert_allclose(hilb_envelope("-", 10, 1.0), math.sqrt(10), rtol=1e-14)
    np.testing.assert_allclose(hilb_envelope("+", 10, 0.0), 1.01**-0.25, rtol=1e-14)
    assert hilb_envelope("+", 10, 0.4) == pytest.approx(hilb_envelope("-", 10, -0.4))
    with pytest.raises(ValueError):
        hilb_envelope("+", 0, 0.0)
    with pytest.raises(ValueError):
        hilb_envelope("*", 3, 0.0)


ENVELOPE_N = [2**k for k in range(5, 12)]


@pytest.fixture(scope="module")
def envelope_ratios():
    x = chebyshev_grid(10_000)
    out = {}
    for a, b in PARAM_GRID:
        P = JacobiParams(a, b)
        out[a, b] = np.array([
            np.max(np.abs(jacobi_function(P, n, x)) / (hilb_envelope("+", n, x) + hilb_envelope("-", n, x)))
            for n in ENVELOPE_N
        ])
    return out


@pytest.mark.parametrize("alpha,beta", PARAM_GRID)
def test_envelope_ratio_is_stable(envelope_ratios, alpha, beta):
    r = envelope_ratios[alpha, beta]
    assert np.all(np.isfinite(r))
    # the fitted constant from small degrees holds up to a shrinking 1/n transient
    c_small = r[0]
    assert np.max(r) <= 1.25 * c_small
    # no growth trend once past the transient
    upper = np.log(ENVELOPE_N[3:]), np.log(r[3:])
    slope = np.polyfit(*upper, 1)[0]
    assert abs(slope) <= 0.02


def test_endpoint_bound_examples():
    P = JacobiParams(0.0, 0.0)
    grid = chebyshev_grid(4000)
    uppers = [endpoint_bound_check(P, n, grid).upper_witness for n in range(1, 201, 7)]
    C = max(uppers)
    assert C < 1.0
    assert endpoint_bound_check(P, 4, [0.0]).upper_witness <= C
    low = endpoint_bound_check(JacobiParams(1.0, 0.0), 50, grid)
    assert low.lower_witness > 0.3
