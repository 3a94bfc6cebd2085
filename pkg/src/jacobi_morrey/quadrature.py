"""Gauss-Jacobi rules, composite integration and the finite Hilbert transform.

The Hilbert transform on (-1, 1) is

    Hf(x) = p.v. int_{-1}^{1} f(t) / (x - t) dt.

For callables it is computed by singularity subtraction; for piecewise-linear
samples and step functions the Cauchy integrals of each piece are done in
closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .jacobi_core import JacobiParams, recurrence_coefficients

__all__ = [
    "QuadratureRule",
    "SampledFunction",
    "StepFunction",
    "gauss_jacobi_rule",
    "gauss_legendre_panels",
    "composite_rule",
    "integrate",
    "pv_hilbert",
    "hilbert_on_grid",
    "hilbert_transform",
    "default_order",
]

_ENDPOINT_GAP = 1e-14


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for the measure (1-x)^a (1+x)^b dx on (-1, 1)."""

    nodes: np.ndarray
    weights: np.ndarray
    weight_exponents: tuple = (0.0, 0.0)

    def __post_init__(self):
        nodes, weights = _frozen(self.nodes), _frozen(self.weights)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size < 1:
            raise ValueError("nodes and weights must be 1-d arrays of equal positive length")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(np.abs(nodes) >= 1.0):
            raise ValueError("nodes must lie in the open interval (-1, 1)")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "weight_exponents", tuple(float(e) for e in self.weight_exponents))

    def __len__(self):
        return self.nodes.size


@dataclass(frozen=True)
class SampledFunction:
    """A function on (-1, 1) given by values on a strictly increasing grid.

    Between grid points the function is the linear interpolant.  Where a
    consumer needs values on all of (-1, 1) (Hilbert transform, Morrey norms)
    the end values are extended as constants; plain quadrature through
    :func:`integrate` refuses to extrapolate.
    """

    grid: np.ndarray
    values: np.ndarray
    label: str | None = None

    def __post_init__(self):
        grid, values = _frozen(self.grid), _frozen(self.values)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ValueError("grid and values must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if grid[0] <= -1.0 or grid[-1] >= 1.0:
            raise ValueError("grid must lie strictly inside (-1, 1)")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __call__(self, x, extrapolate=True):
        x = np.asarray(x, dtype=float)
        if not extrapolate and (np.any(x < self.grid[0]) or np.any(x > self.grid[-1])):
            raise ValueError(
                f"sampled function '{self.label}' evaluated outside its grid hull "
                f"[{self.grid[0]}, {self.grid[-1]}]"
            )
        return np.interp(x, self.grid, self.values)

    @property
    def breakpoints(self):
        return self.grid


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant function: ``values[i]`` on ``(edges[i], edges[i+1])``, zero elsewhere."""

    edges: np.ndarray
    values: np.ndarray
    label: str | None = None

    def __post_init__(self):
        edges, values = _frozen(self.edges), _frozen(self.values)
        if edges.ndim != 1 or values.ndim != 1 or edges.size != values.size + 1 or values.size < 1:
            raise ValueError("need len(edges) == len(values) + 1 >= 2")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("edges must be strictly increasing")
        if edges[0] < -1.0 or edges[-1] > 1.0:
            raise ValueError("edges must lie in [-1, 1]")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "values", values)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.edges, x, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size)
        out = np.where(inside, self.values[np.clip(idx, 0, self.values.size - 1)], 0.0)
        return out if out.ndim else float(out)

    @property
    def breakpoints(self):
        return self.edges

    @classmethod
    def indicator(cls, a, b, label=None):
        return cls([a, b], [1.0], label or f"chi({a},{b})")


@lru_cache(maxsize=64)
def _gauss_jacobi_cached(a, b, m):
    diag, off, mu0 = recurrence_coefficients(JacobiParams(a, b), m)
    if m == 1:
        nodes = diag.copy()
    else:
        try:
            nodes = eigvalsh_tridiagonal(diag, off, lapack_driver="stev")
        except np.linalg.LinAlgError as exc:
            raise RuntimeError(f"Jacobi-matrix eigensolver failed for a={a}, b={b}, m={m}") from exc
        # one Newton step on q_m; the weights below are sensitive to node
        # errors at the m^2 eps level near the endpoints
        q, dq = _orthonormal_value_and_derivative(diag, off, mu0, nodes, a, b)
        nodes = nodes - q / dq
    # Christoffel numbers 1 / sum_k q_k(x)^2, equal to mu0 times the squared
    # first eigenvector components
    q0 = np.full(m, 1.0 / np.sqrt(mu0))
    s = q0 * q0
    if m > 1:
        q1 = (nodes - diag[0]) * q0 / off[0]
        s = s + q1 * q1
        for k in range(1, m - 1):
            q0, q1 = q1, ((nodes - diag[k]) * q1 - off[k - 1] * q0) / off[k]
            s += q1 * q1
    return QuadratureRule(nodes, 1.0 / s, (a, b))


def _orthonormal_value_and_derivative(diag, off, mu0, x, a, b):
    """q_m(x) and q_m'(x) for the orthonormal polynomials of the weight."""
    m = diag.size
    c = 2.0 * m + a + b
    b_m = np.sqrt(4.0 * m * (m + a) * (m + b) * (m + a + b) / (c * c * (c + 1.0) * (c - 1.0)))
    q_prev, q = np.zeros_like(x), np.full_like(x, 1.0 / np.sqrt(mu0))
    d_prev, d = np.zeros_like(x), np.zeros_like(x)
    for k in range(m):
        bk = off[k - 1] if k > 0 else 0.0
        bk1 = off[k] if k < m - 1 else b_m
        q_prev, q, d_prev, d = (
            q,
            ((x - diag[k]) * q - bk * q_prev) / bk1,
            d,
            (q + (x - diag[k]) * d - bk * d_prev) / bk1,
        )
    return q, d


def gauss_jacobi_rule(a, b, m) -> QuadratureRule:
    """m-point Gauss rule for (1-x)^a (1+x)^b dx (Golub-Welsch).

    Exact for polynomials of degree <= 2m - 1.  Rules are cached and
    immutable.
    """
    if a <= -1 or b <= -1:
        raise ValueError(f"weight exponents must exceed -1, got ({a}, {b})")
    if int(m) != m or m < 1:
        raise ValueError(f"number of nodes must be a positive integer, got {m!r}")
    return _gauss_jacobi_cached(float(a), float(b), int(m))


def default_order(degree) -> int:
    """Rule size used for integrands involving Jacobi functions up to ``degree``."""
    return 4 * int(degree) + 64


def gauss_legendre_panels(breaks, m=8):
    """Composite Gauss-Legendre nodes/weights on the panels between ``breaks``.

    Returns ``(nodes, weights, panel_index)``; nodes are ordered panel by panel.
    """
    breaks = np.asarray(breaks, dtype=float)
    rule = gauss_jacobi_rule(0.0, 0.0, m)
    lo, hi = breaks[:-1], breaks[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * rule.nodes[None, :]).ravel()
    weights = (half[:, None] * rule.weights[None, :]).ravel()
    panel = np.repeat(np.arange(lo.size), m)
    return nodes, weights, panel


def composite_rule(breaks, m, a=0.0, b=0.0):
    """Composite rule for (1-x)^a (1+x)^b dx on panels split at ``breaks``.

    ``breaks`` must start at -1 and end at 1.  The two end panels use
    Gauss-Jacobi rules carrying the endpoint singularity; interior panels use
    Gauss-Legendre times the (smooth there) weight.  Returns ``(nodes, weights)``.
    """
    breaks = np.unique(np.asarray(breaks, dtype=float))
    if breaks[0] != -1.0 or breaks[-1] != 1.0:
        raise ValueError("composite breaks must start at -1 and end at 1")
    parts_x, parts_w = [], []
    if breaks.size == 2:
        r = gauss_jacobi_rule(a, b, m)
        return np.array(r.nodes), np.array(r.weights)
    # left end panel [-1, c]: (1+x)^b singular, (1-x)^a smooth
    c = breaks[1]
    r = gauss_jacobi_rule(0.0, b, m)
    h = 0.5 * (c + 1.0)
    x = -1.0 + h * (r.nodes + 1.0)
    parts_x.append(x)
    parts_w.append(r.weights * h ** (1.0 + b) * (1.0 - x) ** a)
    if breaks.size > 3:
        x, w, _ = gauss_legendre_panels(breaks[1:-1], m)
        parts_x.append(x)
        parts_w.append(w * (1.0 - x) ** a * (1.0 + x) ** b)
    c = breaks[-2]
    r = gauss_jacobi_rule(a, 0.0, m)
    h = 0.5 * (1.0 - c)
    x = c + h * (r.nodes + 1.0)
    parts_x.append(x)
    parts_w.append(r.weights * h ** (1.0 + a) * (1.0 + x) ** b)
    return np.concatenate(parts_x), np.concatenate(parts_w)


def integrate(f, rule: QuadratureRule) -> float:
    """sum_i w_i f(x_i) for a callable, sampled or step function ``f``."""
    if isinstance(f, SampledFunction):
        vals = f(rule.nodes, extrapolate=False)
    else:
        vals = np.asarray(f(rule.nodes), dtype=float)
        if vals.ndim == 0:
            vals = np.full(rule.nodes.shape, float(vals))
    return float(np.dot(rule.weights, vals))


def _log_ratio(x):
    return np.log1p(x) - np.log1p(-x)


def _check_targets(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 - _ENDPOINT_GAP):
        raise ValueError("Hilbert transform targets must stay at least 1e-14 away from +-1")
    return x


def pv_hilbert(f, x, m=64):
    """Principal value of int_{-1}^1 f(t) / (x - t) dt.

    Computed as  int (f(t) - f(x)) / (x - t) dt  with an m-point Gauss-Legendre
    rule on each of [-1, x] and [x, 1], plus the exact term
    f(x) log((1 + x) / (1 - x)).  ``x`` may be an array.
    """
    xa = _check_targets(x)
    xs = np.atleast_1d(xa)
    rule = gauss_jacobi_rule(0.0, 0.0, m)
    s, w = rule.nodes, rule.weights
    fx = np.asarray(f(xs), dtype=float) * np.ones_like(xs)
    total = fx * _log_ratio(xs)
    for lo, hi in ((-np.ones_like(xs), xs), (xs, np.ones_like(xs))):
        half = 0.5 * (hi - lo)
        t = 0.5 * (hi + lo)[:, None] + half[:, None] * s[None, :]
        ft = np.asarray(f(t), dtype=float)
        total = total + half * np.sum(w * (ft - fx[:, None]) / (xs[:, None] - t), axis=1)
    return total if np.ndim(xa) else float(total[0])


def _chunks(n_targets, n_pieces, budget=2_000_000):
    step = max(1, budget // max(n_pieces, 1))
    for start in range(0, n_targets, step):
        yield slice(start, min(start + step, n_targets))


def _hilbert_linear(f: SampledFunction, x):
    # Summing the closed-form Cauchy integrals of the linear pieces telescopes to
    #   f_0 log(1+x) - f_N log(1-x) - (f_N - f_0) + sum_k ds_k (x - g_k) log|x - g_k|
    # with ds_k the slope jump at g_k (constant extension beyond the hull).
    g, v = f.grid, f.values
    slope = np.concatenate(([0.0], np.diff(v) / np.diff(g), [0.0]))
    jump = np.diff(slope)
    out = v[0] * np.log1p(x) - v[-1] * np.log1p(-x) - (v[-1] - v[0])
    for sl in _chunks(x.size, g.size):
        d = x[sl, None] - g[None, :]
        out[sl] += _xlogx_abs(d) @ jump
    return out


def _xlogx_abs(d):
    out = np.zeros_like(d)
    nz = d != 0.0
    out[nz] = d[nz] * np.log(np.abs(d[nz]))
    return out


def _hilbert_step(f: StepFunction, x):
    e, v = f.edges, f.values
    jumps = np.diff(np.concatenate(([0.0], v, [0.0])))
    out = np.zeros_like(x)
    with np.errstate(divide="ignore"):
        for sl in _chunks(x.size, e.size):
            # int_{e_i}^{e_{i+1}} dt / (x - t) = log|x - e_i| - log|x - e_{i+1}|
            out[sl] = np.sum(jumps[None, :] * np.log(np.abs(x[sl, None] - e[None, :])), axis=1)
    return out


def hilbert_on_grid(f, targets) -> SampledFunction:
    """Hilbert transform of a sampled (piecewise-linear) or step function at ``targets``.

    The pieces are integrated against 1/(x - t) in closed form, so the only
    error is the representation of ``f`` itself.  For step functions the
    transform is infinite at the jumps; targets there give ``-inf``/``inf``.
    """
    x = _check_targets(targets)
    x = np.atleast_1d(x)
    if isinstance(f, SampledFunction):
        vals = _hilbert_linear(f, x)
    elif isinstance(f, StepFunction):
        vals = _hilbert_step(f, x)
    else:
        raise TypeError("hilbert_on_grid needs a SampledFunction or StepFunction")
    label = f"H[{f.label}]" if f.label else None
    return SampledFunction(x, vals, label)


def hilbert_transform(f, x, m=64):
    """Dispatch to the closed-form path for sampled/step functions, else :func:`pv_hilbert`."""
    if isinstance(f, (SampledFunction, StepFunction)):
        xa = np.atleast_1d(_check_targets(x))
        vals = _hilbert_linear(f, xa) if isinstance(f, SampledFunction) else _hilbert_step(f, xa)
        return vals if np.ndim(x) else float(vals[0])
    return pv_hilbert(f, x, m)
