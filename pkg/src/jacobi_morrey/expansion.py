"""Fourier-Jacobi coefficients, partial sums and the Pollard pieces.

a_k(f) = int_{-1}^1 p_k(t) f(t) dt,   S_n f = sum_{k<=n} a_k(f) p_k.

Since p_k = d_k P_k (1-t)^(alpha/2) (1+t)^(beta/2), coefficients are computed
with a rule for the measure (1-t)^(alpha/2) (1+t)^(beta/2) dt applied to
d_k P_k f, so fractional endpoint powers are never evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jacobi_core import (
    JacobiParams,
    _orthonormal_recur,
    check_degree,
    jacobi_function,
    jacobi_roots,
)
from .morrey import DEFAULT_SCAN, BallScan, MorreyExponents, ScanSpec, evaluate_on
from .quadrature import (
    SampledFunction,
    StepFunction,
    composite_rule,
    default_order,
    gauss_jacobi_rule,
    hilbert_on_grid,
)

__all__ = [
    "ExpansionCoefficients",
    "coefficients",
    "coefficient",
    "partial_sum",
    "partial_sum_function",
    "t_operator",
    "kernel",
    "pollard_operator",
    "sign_of_jacobi",
    "signed_power_of_jacobi",
    "chebyshev_grid",
]

_PANEL_ORDER = 16


@dataclass(frozen=True)
class ExpansionCoefficients:
    params: JacobiParams
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def truncated(self, n) -> "ExpansionCoefficients":
        """Coefficients of S_n applied to the expanded function."""
        n = check_degree(n)
        if n > self.degree:
            raise ValueError(f"cannot truncate degree-{self.degree} coefficients to n = {n}")
        return ExpansionCoefficients(self.params, self.coeffs[: n + 1])

    def l2_norm_squared(self) -> float:
        return float(np.dot(self.coeffs, self.coeffs))


def _rule_for(f, params, N, breakpoints, order):
    """Nodes, weights and integrand values for a_k(f) = int d_k P_k g w.

    ``w`` is (1-t)^(alpha/2) (1+t)^(beta/2) times any endpoint powers ``f``
    declares through ``endpoint_exponents`` (then ``g = f.smooth``).
    """
    a, b = params.alpha / 2.0, params.beta / 2.0
    g = f
    ends = getattr(f, "endpoint_exponents", None)
    if ends is not None and hasattr(f, "smooth"):
        a, b = a + ends[0], b + ends[1]
        g = f.smooth
    bps = [] if breakpoints is None else list(np.atleast_1d(breakpoints))
    if isinstance(f, (SampledFunction, StepFunction)):
        bps += list(f.breakpoints)
    bps = np.asarray(bps, dtype=float)
    bps = bps[np.abs(bps) < 1.0]
    if bps.size == 0 or g is not f:
        # a declared smooth part needs no splitting
        rule = gauss_jacobi_rule(a, b, order or default_order(N + getattr(f, "n", 0)))
        return rule.nodes, rule.weights, g
    # enough Chebyshev panels that each sees a few oscillations of p_N
    panels = N // 2 + 4
    base = -np.cos(np.pi * np.arange(panels + 1) / panels)
    base[0], base[-1] = -1.0, 1.0
    nodes, weights = composite_rule(np.concatenate((base, bps)), order or _PANEL_ORDER, a, b)
    return nodes, weights, g


def coefficients(f, params: JacobiParams, N, breakpoints=None, order=None) -> ExpansionCoefficients:
    """a_0(f) .. a_N(f).

    Smooth ``f`` uses one Gauss-Jacobi rule of ``4 N + 64`` nodes.  When
    ``f`` has break points (given explicitly, or a sampled/step function) a
    composite rule split at them is used instead.  Objects exposing
    ``endpoint_exponents`` and ``smooth`` (such as
    :class:`~jacobi_morrey.jacobi_core.JacobiFunction`) have their endpoint
    powers folded into the rule.
    """
    N = check_degree(N)
    nodes, weights, g = _rule_for(f, params, N, breakpoints, order)
    fw = weights * evaluate_on(g, nodes)
    out = np.empty(N + 1)
    for k, q in enumerate(_orthonormal_recur(params, N, nodes)):
        out[k] = np.dot(fw, q)
        if not np.isfinite(out[k]):
            raise FloatingPointError(f"non-finite coefficient a_{k}")
    return ExpansionCoefficients(params, out)


def coefficient(f, params: JacobiParams, k, breakpoints=None, order=None) -> float:
    """The single coefficient a_k(f)."""
    k = check_degree(k)
    nodes, weights, g = _rule_for(f, params, k, breakpoints, order)
    fw = weights * evaluate_on(g, nodes)
    for q in _orthonormal_recur(params, k, nodes):
        pass
    val = float(np.dot(fw, q))
    if not np.isfinite(val):
        raise FloatingPointError(f"non-finite coefficient a_{k}")
    return val


def partial_sum(coeffs: ExpansionCoefficients, n, x):
    """S_n f(x) = sum_{k<=n} a_k p_k(x)."""
    n = check_degree(n)
    if n > coeffs.degree:
        raise ValueError(f"partial sum of order {n} needs coefficients up to {n}, have {coeffs.degree}")
    params = coeffs.params
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0):
        raise ValueError("partial sums are evaluated on [-1, 1]")
    acc = np.zeros_like(xa)
    for k, q in enumerate(_orthonormal_recur(params, n, xa)):
        acc = acc + coeffs.coeffs[k] * q
    with np.errstate(divide="ignore", invalid="ignore"):
        val = acc * (1.0 - xa) ** (params.alpha / 2.0) * (1.0 + xa) ** (params.beta / 2.0)
    return val if np.ndim(x) else float(val)


class _PartialSum:
    """S_n f as a callable; exposes its polynomial part for exact re-expansion."""

    def __init__(self, coeffs, n):
        self.coeffs, self.n = coeffs, check_degree(n)
        if self.n > coeffs.degree:
            raise ValueError(f"partial sum of order {n} needs coefficients up to {n}, have {coeffs.degree}")
        p = coeffs.params
        self.endpoint_exponents = (p.alpha / 2.0, p.beta / 2.0)

    def __call__(self, x):
        return partial_sum(self.coeffs, self.n, x)

    def smooth(self, x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for k, q in enumerate(_orthonormal_recur(self.coeffs.params, self.n, x)):
            acc = acc + self.coeffs.coeffs[k] * q
        return acc


def partial_sum_function(coeffs: ExpansionCoefficients, n):
    """S_n f as a callable."""
    return _PartialSum(coeffs, n)


def sign_of_jacobi(params: JacobiParams, n) -> StepFunction:
    """sgn(p_n) as a step function with jumps at the zeros of P_n."""
    n = check_degree(n)
    roots = jacobi_roots(params, n)
    edges = np.concatenate(([-1.0], roots, [1.0]))
    # P_n(1) > 0, so the sign on the last interval is +1
    signs = (-1.0) ** np.arange(n, -1, -1)
    return StepFunction(edges, signs, f"sgn(p_{n})")


class _SignedPower:
    """sgn(p_n) |p_n|^e as a callable with its zeros as break points."""

    def __init__(self, params, n, e):
        self.params, self.n, self.e = params, n, e
        self.breakpoints = jacobi_roots(params, n)

    def __call__(self, x):
        v = jacobi_function(self.params, self.n, np.asarray(x, dtype=float))
        return np.sign(v) * np.abs(v) ** self.e


def signed_power_of_jacobi(params: JacobiParams, n, e):
    """sgn(p_n) |p_n|^e; ``e = q - 1`` gives the second necessity witness."""
    return _SignedPower(params, check_degree(n), float(e))


def _jacobi_ball_scan(params, n, scan):
    return BallScan(scan, jacobi_roots(params, n))


def t_operator(f, params: JacobiParams, n, exps: MorreyExponents, scan: ScanSpec = DEFAULT_SCAN,
               breakpoints=None, ball_scan=None) -> float:
    """||T_n f||_{p,lam} with T_n f = S_n f - S_{n-1} f = a_n(f) p_n.

    Evaluated in the factorized form |a_n(f)| ||p_n||_{p,lam}.
    """
    n = check_degree(n)
    if n < 1:
        raise ValueError("T_n needs n >= 1")
    bps = getattr(f, "breakpoints", None) if breakpoints is None else breakpoints
    a_n = coefficient(f, params, n, bps)
    bs = ball_scan or _jacobi_ball_scan(params, n, scan)
    pn = np.abs(jacobi_function(params, n, bs.nodes))
    return abs(a_n) * bs.morrey_from_values(pn, exps)


def kernel(params: JacobiParams, n, x, t):
    """K_n(x, t) = sum_{k<=n} p_k(x) p_k(t) by direct summation."""
    n = check_degree(n)
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    if np.any(np.abs(x) >= 1.0) or np.any(np.abs(t) >= 1.0):
        raise ValueError("kernel arguments must lie in (-1, 1)")
    acc = np.zeros(x.shape)
    for qx, qt in zip(_orthonormal_recur(params, n, x), _orthonormal_recur(params, n, t)):
        acc = acc + qx * qt
    hw = lambda y: (1.0 - y) ** (params.alpha / 2.0) * (1.0 + y) ** (params.beta / 2.0)  # noqa: E731
    val = acc * (hw(x) * hw(t))
    return val if val.ndim else float(val)


def chebyshev_grid(count):
    """``count`` Chebyshev points of the first kind, increasing, inside (-1, 1)."""
    k = np.arange(count)
    return -np.cos(np.pi * (k + 0.5) / count)


def _default_density(n):
    return 16 * (n + 2) + 128


def pollard_operator(which, f, params: JacobiParams, n, targets=None, sample_grid=None) -> SampledFunction:
    """Apply W_{1,n}, W_{2,n} or W_{3,n} to ``f``.

    W1 f = p_{n+1} H((1 - t^2)^(1/2) p_n^(alpha+1,beta+1) f)
    W2 f = (1 - x^2)^(1/2) p_{n+1}^(alpha+1,beta+1) H(p_n f)
    W3 f = p_{n+1} a_{n+1}(f)

    The Hilbert arguments are sampled on ``sample_grid`` (Chebyshev points,
    16 per degree by default) and transformed in closed form as piecewise
    linear functions.  ``targets`` defaults to the same kind of grid.
    """
    n = check_degree(n)
    if targets is None:
        targets = chebyshev_grid(_default_density(n))
    x = np.asarray(targets, dtype=float)
    shifted = params.shifted()
    if which in ("W3", 3):
        a = coefficient(f, params, n + 1, getattr(f, "breakpoints", None))
        return SampledFunction(x, a * jacobi_function(params, n + 1, x), f"W3_{n}")
    grid = chebyshev_grid(_default_density(n)) if sample_grid is None else np.asarray(sample_grid, float)
    fv = evaluate_on(f, grid)
    if which in ("W1", 1):
        g = np.sqrt(1.0 - grid * grid) * jacobi_function(shifted, n, grid) * fv
        outer = jacobi_function(params, n + 1, x)
    elif which in ("W2", 2):
        g = jacobi_function(params, n, grid) * fv
        outer = np.sqrt(1.0 - x * x) * jacobi_function(shifted, n + 1, x)
    else:
        raise ValueError(f"unknown Pollard piece {which!r}; expected W1, W2 or W3")
    h = hilbert_on_grid(SampledFunction(grid, g), x)
    return SampledFunction(x, outer * h.values, f"{which}_{n}")
