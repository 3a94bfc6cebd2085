"""Jacobi polynomials, their orthonormal functions on (-1, 1) and Hilb envelopes.

The orthonormal Jacobi functions are

    p_n(x) = d_n P_n(x) (1 - x)^(alpha/2) (1 + x)^(beta/2),

orthonormal in L^2(-1, 1) with Lebesgue measure.  ``d_n`` is obtained from the
closed Gamma-function value of the weighted L^2 norm of ``P_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma, log

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

__all__ = [
    "JacobiParams",
    "check_degree",
    "jacobi_poly",
    "jacobi_poly_table",
    "normalization_constant",
    "log_norm_squared",
    "recurrence_coefficients",
    "orthonormal_table",
    "jacobi_function",
    "jacobi_function_table",
    "jacobi_roots",
    "JacobiFunction",
    "hilb_envelope",
    "EndpointBoundReport",
    "endpoint_bound_check",
]

# jitter allowed on |x| <= 1 in relaxed mode
_RELAXED_TOL = 1e-12
# above this degree p_n is evaluated by the orthonormal recurrence
NORMALIZED_THRESHOLD = 10_000


@dataclass(frozen=True)
class JacobiParams:
    """The pair (alpha, beta) indexing the Jacobi system."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")
        if self.alpha <= -1 or self.beta <= -1:
            raise ValueError(
                f"Jacobi parameters need alpha > -1 and beta > -1, got ({self.alpha}, {self.beta})"
            )
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def nonnegative(self) -> bool:
        """True when alpha >= 0 and beta >= 0 (the regime of the norm growth predictions)."""
        return self.alpha >= 0 and self.beta >= 0

    def shifted(self, da=1.0, db=1.0) -> "JacobiParams":
        return JacobiParams(self.alpha + da, self.beta + db)

    def swapped(self) -> "JacobiParams":
        return JacobiParams(self.beta, self.alpha)


def check_degree(n) -> int:
    if isinstance(n, (bool, np.bool_)) or int(n) != n or n < 0:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")
    return int(n)


def _as_points(x, strict):
    x = np.asarray(x, dtype=float)
    tol = 0.0 if strict else _RELAXED_TOL
    if np.any(~np.isfinite(x)) or np.any(np.abs(x) > 1.0 + tol):
        bad = x[~(np.abs(x) <= 1.0 + tol)].ravel()[0]
        raise ValueError(f"Jacobi polynomials are evaluated on [-1, 1]; got x = {bad!r}")
    if not strict:
        x = np.clip(x, -1.0, 1.0)
    return x


def _recur_P(a, b, n, x):
    """Yield P_0 .. P_n at x by the standard three-term recurrence."""
    p0 = np.ones_like(x)
    yield p0
    if n == 0:
        return
    p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    yield p1
    ab = a + b
    a2b2 = a * a - b * b
    for k in range(2, n + 1):
        c = 2.0 * k + ab
        A = 2.0 * k * (k + ab) * (c - 2.0)
        B = (c - 1.0) * (c * (c - 2.0) * x + a2b2)
        C = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c
        p0, p1 = p1, (B * p1 - C * p0) / A
        yield p1


def jacobi_poly(params: JacobiParams, n, x, strict=True):
    """Evaluate P_n^(alpha, beta)(x).

    Parameters
    ----------
    params : JacobiParams
    n : int
        Degree.
    x : float or ndarray
        Points in [-1, 1].
    strict : bool
        If False, points within 1e-12 of [-1, 1] are clipped onto it instead
        of raising.

    Returns
    -------
    float or ndarray
    """
    n = check_degree(n)
    xa = _as_points(x, strict)
    for val in _recur_P(params.alpha, params.beta, n, xa):
        pass
    return val if np.ndim(x) else float(val)


def jacobi_poly_table(params: JacobiParams, n, x, strict=True):
    """P_0 .. P_n at x, shape ``(n + 1,) + x.shape``."""
    n = check_degree(n)
    xa = _as_points(x, strict)
    return np.stack(list(_recur_P(params.alpha, params.beta, n, xa)))


def log_norm_squared(params: JacobiParams, n) -> float:
    """log of the weighted norm  int P_n^2 (1-x)^alpha (1+x)^beta dx."""
    n = check_degree(n)
    a, b = params.alpha, params.beta
    if n == 0:
        return (a + b + 1.0) * log(2.0) + lgamma(a + 1.0) + lgamma(b + 1.0) - lgamma(a + b + 2.0)
    return (
        (a + b + 1.0) * log(2.0)
        - log(2.0 * n + a + b + 1.0)
        + lgamma(n + a + 1.0)
        + lgamma(n + b + 1.0)
        - lgamma(n + a + b + 1.0)
        - lgamma(n + 1.0)
    )


def normalization_constant(params: JacobiParams, n) -> float:
    """d_n with 1/d_n^2 equal to the weighted L^2 norm of P_n."""
    val = np.exp(-0.5 * log_norm_squared(params, n))
    if not np.isfinite(val) or val == 0.0:
        raise OverflowError(f"normalization constant out of range for n={n}, {params}")
    return float(val)


def recurrence_coefficients(params: JacobiParams, m):
    """Jacobi-matrix entries for the orthonormal polynomials of the weight.

    Returns ``(diag, offdiag, mu0)`` with ``diag`` of length m, ``offdiag`` of
    length m - 1 (entries b_1 .. b_{m-1}) and ``mu0`` the total mass of the
    weight (1-x)^alpha (1+x)^beta.
    """
    a, b = params.alpha, params.beta
    k = np.arange(m, dtype=float)
    c = 2.0 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (b * b - a * a) / (c * (c + 2.0))
    diag[0] = (b - a) / (a + b + 2.0)
    kk = np.arange(1, m, dtype=float)
    cc = 2.0 * kk + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (cc * cc * (cc + 1.0) * (cc - 1.0))
    if m > 1:
        # closed form at k = 1 avoids 0/0 when a + b = -1
        off2[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((a + b + 2.0) ** 2 * (a + b + 3.0))
    mu0 = np.exp(log_norm_squared(params, 0))
    return diag, np.sqrt(off2), mu0


def _orthonormal_recur(params, n, x):
    diag, off, mu0 = recurrence_coefficients(params, n + 1)
    q0 = np.full_like(x, 1.0 / np.sqrt(mu0))
    yield q0
    if n == 0:
        return
    q1 = (x - diag[0]) * q0 / off[0]
    yield q1
    for k in range(1, n):
        q0, q1 = q1, ((x - diag[k]) * q1 - off[k - 1] * q0) / off[k]
        yield q1


def orthonormal_table(params: JacobiParams, n, x, strict=True):
    """d_k P_k(x) for k = 0..n via the orthonormal recurrence."""
    n = check_degree(n)
    xa = _as_points(x, strict)
    return np.stack(list(_orthonormal_recur(params, n, xa)))


def _half_weight(params, x):
    return (1.0 - x) ** (params.alpha / 2.0) * (1.0 + x) ** (params.beta / 2.0)


def jacobi_function(params: JacobiParams, n, x, strict=True):
    """The orthonormal Jacobi function p_n^(alpha, beta)(x).

    At x = 1 the value is the one-sided limit: 0 when alpha > 0, d_n P_n(1)
    when alpha = 0 (similarly at x = -1 with beta).  For n above
    ``NORMALIZED_THRESHOLD`` the orthonormal recurrence is used instead of the
    product d_n P_n, which would overflow for large parameters.
    """
    n = check_degree(n)
    xa = _as_points(x, strict)
    if n > NORMALIZED_THRESHOLD:
        for q in _orthonormal_recur(params, n, xa):
            pass
    else:
        for q in _recur_P(params.alpha, params.beta, n, xa):
            pass
        q = normalization_constant(params, n) * q
    with np.errstate(divide="ignore", invalid="ignore"):
        val = q * _half_weight(params, xa)
    return val if np.ndim(x) else float(val)


def jacobi_function_table(params: JacobiParams, n, x, strict=True):
    """p_0 .. p_n at x, shape ``(n + 1,) + x.shape``."""
    xa = _as_points(x, strict)
    return orthonormal_table(params, n, xa) * _half_weight(params, xa)


def jacobi_roots(params: JacobiParams, n):
    """The n zeros of P_n^(alpha, beta), increasing.

    Eigenvalues of the n x n Jacobi matrix, refined by two Newton steps.
    """
    n = check_degree(n)
    if n == 0:
        return np.empty(0)
    diag, off, _ = recurrence_coefficients(params, n)
    x = eigvalsh_tridiagonal(diag, off)
    dparams = params.shifted()
    scale = 0.5 * (n + params.alpha + params.beta + 1.0)
    for _ in range(2):
        val = jacobi_poly(params, n, x)
        der = scale * jacobi_poly(dparams, n - 1, x)
        step = val / der
        # reject steps that would leave the bracket of neighbouring zeros
        cand = x - step
        ok = np.abs(step) < 0.25 * np.min(np.diff(np.r_[-1.0, x, 1.0]))
        x = np.where(ok, cand, x)
    return np.sort(np.clip(x, -1.0, 1.0))


class JacobiFunction:
    """p_n^(alpha, beta) as a callable carrying its analytic structure.

    ``breakpoints`` are the zeros (kinks of |p_n|), ``endpoint_exponents`` the
    powers of (1 - x) and (1 + x) factored out, and :meth:`smooth` the
    polynomial part d_n P_n.
    """

    def __init__(self, params: JacobiParams, n):
        self.params = params
        self.n = check_degree(n)
        self.endpoint_exponents = (params.alpha / 2.0, params.beta / 2.0)
        self._roots = None

    def __call__(self, x):
        return jacobi_function(self.params, self.n, x)

    def smooth(self, x):
        x = np.asarray(x, dtype=float)
        return normalization_constant(self.params, self.n) * jacobi_poly(self.params, self.n, x)

    @property
    def breakpoints(self):
        if self._roots is None:
            self._roots = jacobi_roots(self.params, self.n)
        return self._roots

    def __repr__(self):
        return f"JacobiFunction({self.params.alpha}, {self.params.beta}, n={self.n})"


def hilb_envelope(sign, n, x):
    """h_{+,n}(x) = (1 + x + n^-2)^(-1/4) or h_{-,n}(x) = (1 - x + n^-2)^(-1/4)."""
    n = check_degree(n)
    if n < 1:
        raise ValueError("envelope needs n >= 1")
    s = _sign(sign)
    x = np.asarray(x, dtype=float)
    val = (1.0 + s * x + 1.0 / (n * n)) ** -0.25
    return val if np.ndim(val) else float(val)


def _sign(sign):
    if sign in ("+", 1, +1.0):
        return 1.0
    if sign in ("-", -1, -1.0):
        return -1.0
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


@dataclass(frozen=True)
class EndpointBoundReport:
    n: int
    upper_witness: float  # max |p_n(x)| (1 - x^2)^(1/4) over the grid
    lower_witness: float  # min |P_n(x)| / n^alpha over (1 - 1/n^2, 1)
    argmax: float


def endpoint_bound_check(params: JacobiParams, n, grid) -> EndpointBoundReport:
    """Witnesses for the endpoint bounds of p_n and P_n.

    The lower witness is taken over the grid points inside (1 - 1/n^2, 1);
    when the grid has none there, 16 equispaced interior points of that window
    are used.
    """
    n = check_degree(n)
    grid = np.asarray(grid, dtype=float)
    if np.any(np.abs(grid) >= 1.0):
        raise ValueError("grid must lie in the open interval (-1, 1)")
    vals = np.abs(jacobi_function(params, n, grid)) * (1.0 - grid * grid) ** 0.25
    i = int(np.argmax(vals))
    nn = max(n, 1)
    lo = 1.0 - 1.0 / nn**2
    sub = grid[grid > lo]
    if sub.size == 0:
        sub = lo + (np.arange(1, 17) / 17.0) / nn**2
    lower = np.min(np.abs(jacobi_poly(params, n, sub))) / float(nn) ** params.alpha
    return EndpointBoundReport(n, float(vals[i]), float(lower), float(grid[i]))
