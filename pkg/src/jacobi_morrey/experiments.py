"""Numerical verification suites for Morrey-norm behaviour of Jacobi expansions.

Each experiment measures a quantity over a geometric grid of degrees ``n``,
fits its growth in log-log coordinates and compares the fitted exponent with
the predicted one.

Operational conventions
-----------------------
* bounded: fitted log-slope at most ``SLOPE_TOL`` (0.05);
* consistent: ``|fitted - predicted| <= SLOPE_TOL`` and residual at most
  ``RESIDUAL_TOL`` (0.02, root mean square in log-log coordinates);
* logarithmic growth: positive linear fit of the relevant power against
  ``log n`` with ``R^2 >= MIN_R2`` (0.98).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .expansion import coefficients, partial_sum
from .jacobi_core import JacobiParams, hilb_envelope, jacobi_function, jacobi_roots
from .morrey import DEFAULT_SCAN, BallScan, MorreyExponents, PowerWeight, ScanSpec, evaluate_on
from .quadrature import SampledFunction, gauss_legendre_panels, hilbert_transform

__all__ = [
    "SLOPE_TOL",
    "RESIDUAL_TOL",
    "MIN_R2",
    "DEFAULT_N_VALUES",
    "RegionVerdict",
    "LogFit",
    "GrowthReport",
    "ExperimentReport",
    "region_membership",
    "predicted_norm_slope",
    "predicted_power_witness_slope",
    "fit_log_slope",
    "fit_log_growth",
    "norm_growth_experiment",
    "dual_growth_experiment",
    "necessity_experiment",
    "boundary_divergence_experiment",
    "hilbert_weight_experiment",
    "convergence_experiment",
    "mnt_check",
]

SLOPE_TOL = 0.05
RESIDUAL_TOL = 0.02
MIN_R2 = 0.98
TIE_TOL = 1e-12
DEFAULT_N_VALUES = tuple(2**k for k in range(6, 12))
# floor applied before taking logs of measured values
_TINY = 1e-300


# --------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class RegionVerdict:
    """Position of (p, lambda) relative to 4(1-lambda)/3 < p < 4(1-lambda)."""

    p: float
    lam: float
    classification: str
    in_scope: bool = True

    @property
    def inside(self) -> bool:
        return self.classification == "inside"

    @property
    def on_boundary(self) -> bool:
        return self.classification in ("lower_boundary", "upper_boundary")


@dataclass(frozen=True)
class LogFit:
    """Least-squares fit ``y = intercept + coefficient * log n``."""

    coefficient: float
    intercept: float
    r_squared: float
    relative_residual: float

    @property
    def positive_log_growth(self) -> bool:
        return self.coefficient > 0 and self.r_squared >= MIN_R2


@dataclass(frozen=True)
class GrowthReport:
    """One measured sequence with its log-log fit and verdict.

    ``behaviour`` is ``"bounded"`` or ``"growing"`` from the fitted slope
    alone; ``verdict`` compares against ``predicted_slope`` (or against the
    logarithmic law when ``log_fit`` decides it).
    """

    n_values: tuple
    measured: tuple
    fitted_log_slope: float
    fit_residual: float
    predicted_slope: float
    verdict: str
    label: str = ""
    behaviour: str = ""
    log_fit: LogFit | None = None

    def __post_init__(self):
        n = tuple(int(v) for v in self.n_values)
        if len(n) < 2 or any(b <= a for a, b in zip(n, n[1:])):
            raise ValueError("n_values must be strictly increasing with at least two entries")
        if len(self.measured) != len(n):
            raise ValueError("one measurement per n is required")
        object.__setattr__(self, "n_values", n)
        object.__setattr__(self, "measured", tuple(float(v) for v in self.measured))

    @property
    def consistent(self) -> bool:
        return self.verdict == "consistent"


@dataclass
class ExperimentReport:
    """Structured, serializable outcome of one experiment cell."""

    name: str
    parameters: dict
    series: list = field(default_factory=list)
    verdict: str = "consistent"
    provenance: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.verdict in ("consistent", "boundary")

    def to_dict(self) -> dict:
        return asdict(self)


# --------------------------------------------------------------------------
# region and predictions


def region_membership(p, lam) -> RegionVerdict:
    """Classify (p, lam) against 4(1-lam)/3 < p < 4(1-lam), p > 1.

    Equality within ``1e-12`` counts as a boundary.  ``lam >= 3/4`` is outside
    the range where the partial-sum theory applies; a warning is issued and
    ``in_scope`` is False.
    """
    p, lam = float(p), float(lam)
    if not math.isfinite(p) or p < 1.0:
        raise ValueError(f"p must satisfy p >= 1, got {p}")
    if not (0.0 <= lam < 1.0):
        raise ValueError(f"lambda must satisfy 0 <= lambda < 1, got {lam}")
    in_scope = lam < 0.75
    if not in_scope:
        warnings.warn(f"lambda = {lam} >= 3/4 is outside the scope of the convergence theory", stacklevel=2)
    lo, hi = 4.0 * (1.0 - lam) / 3.0, 4.0 * (1.0 - lam)
    if abs(p - lo) <= TIE_TOL:
        cls = "lower_boundary"
    elif abs(p - hi) <= TIE_TOL:
        cls = "upper_boundary"
    elif lo < p < hi and p > 1.0:
        cls = "inside"
    else:
        cls = "outside"
    return RegionVerdict(p, lam, cls, in_scope)


def predicted_norm_slope(p, lam) -> float:
    """Growth exponent of ||p_n||_{p,lam}: max(0, 1/2 - 2(1-lam)/p)."""
    return max(0.0, 0.5 - 2.0 * (1.0 - lam) / p)


def predicted_power_witness_slope(p, lam) -> float:
    """Exponent of ||p_n||_q^q ||p_n||_{p,lam} ||p_n||_{q,lam}^(-q/p)."""
    q = p / (p - 1.0)
    return (
        max(0.0, q / 2.0 - 2.0)
        + predicted_norm_slope(p, lam)
        - (q / p) * predicted_norm_slope(q, lam)
    )


# --------------------------------------------------------------------------
# fitting


def fit_log_slope(n_values, measured):
    """Least-squares slope of log(measured) against log(n).

    Returns ``(slope, residual)`` with the residual the root mean square
    deviation in log-log coordinates.  Non-finite data give ``(inf, inf)``.
    """
    y = np.asarray(measured, dtype=float)
    if not np.all(np.isfinite(y)):
        return math.inf, math.inf
    x = np.log(np.asarray(n_values, dtype=float))
    ly = np.log(np.maximum(np.abs(y), _TINY))
    slope, icpt = np.polyfit(x, ly, 1)
    res = float(np.sqrt(np.mean((ly - (icpt + slope * x)) ** 2)))
    return float(slope), res


def fit_log_growth(n_values, y) -> LogFit:
    """Fit ``y = a + c log n`` by least squares."""
    y = np.asarray(y, dtype=float)
    x = np.log(np.asarray(n_values, dtype=float))
    A = np.column_stack((np.ones_like(x), x))
    (a, c), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (a + c * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 0.0
    rel = float(np.sqrt(np.mean(resid**2)) / np.mean(np.abs(y))) if np.any(y) else 0.0
    return LogFit(float(c), float(a), r2, rel)


def _behaviour(slope):
    return "bounded" if slope <= SLOPE_TOL else "growing"


def _report(n_values, measured, predicted, label, log_power=None) -> GrowthReport:
    """Fit ``measured`` and judge it against ``predicted``.

    With ``log_power`` the verdict is the logarithmic law for
    ``measured ** log_power`` instead of the slope comparison.
    """
    slope, res = fit_log_slope(n_values, measured)
    lf = None
    if log_power is not None and np.all(np.isfinite(measured)):
        lf = fit_log_growth(n_values, np.asarray(measured) ** log_power)
        ok = lf.positive_log_growth
    else:
        ok = abs(slope - predicted) <= SLOPE_TOL and res <= RESIDUAL_TOL
    return GrowthReport(
        n_values,
        measured,
        slope,
        res,
        predicted,
        "consistent" if ok else "inconsistent",
        label,
        _behaviour(slope),
        lf,
    )


def _check_n_values(n_values):
    n = [int(v) for v in n_values]
    if len(n) < 2 or any(b <= a for a, b in zip(n, n[1:])) or n[0] < 1:
        raise ValueError("n_values must be strictly increasing positive integers, at least two")
    return n


def _params_dict(params, exps, n_values, scan, **extra):
    d = {
        "alpha": params.alpha if params is not None else None,
        "beta": params.beta if params is not None else None,
        "p": exps.p,
        "lambda": exps.lam,
        "n_values": list(n_values),
        "scan": asdict(scan),
    }
    d.update(extra)
    return d


def _jacobi_scan(params, n, scan):
    bs = BallScan(scan, jacobi_roots(params, n))
    return bs, np.abs(jacobi_function(params, n, bs.nodes))


# --------------------------------------------------------------------------
# experiments


def norm_growth_experiment(params: JacobiParams, exps: MorreyExponents, n_values=DEFAULT_N_VALUES,
                           scan: ScanSpec = DEFAULT_SCAN) -> GrowthReport:
    """Growth of ||p_n||_{p,lam} in n.

    The predicted exponent is ``max(0, 1/2 - 2(1-lam)/p)``.  At p = 4,
    lam = 0 the norm grows like (log n)^(1/4); there ``||p_n||_4^4`` is fitted
    linearly against ``log n`` and that fit decides the verdict.
    """
    if not params.nonnegative:
        raise ValueError("norm growth predictions need alpha >= 0 and beta >= 0")
    if exps.lam > 0.75:
        raise ValueError("norm growth predictions hold for lambda <= 3/4")
    n_values = _check_n_values(n_values)
    vals = []
    for n in n_values:
        bs, a = _jacobi_scan(params, n, scan)
        vals.append(bs.morrey_from_values(a, exps))
    log_case = abs(exps.p - 4.0) <= TIE_TOL and exps.lam == 0.0
    return _report(
        n_values,
        vals,
        predicted_norm_slope(exps.p, exps.lam),
        "norm",
        log_power=4.0 if log_case else None,
    )


def dual_growth_experiment(params: JacobiParams, exps: MorreyExponents, n_values=tuple(2**k for k in range(4, 11)),
                           scan: ScanSpec = DEFAULT_SCAN) -> ExperimentReport:
    """Dual functional of h_{-,n} and h_{+,n} in n.

    Bounded for p >= 4(1-lam)/3.  Below that the scanned value grows; the
    heuristic exponent 2(1-lam)/p - 3/2 (radius integral cut off at the
    n^-2 scale of the envelope) is reported, but only growth is required.
    ``params`` only labels the run; the envelopes do not depend on it.
    """
    if not exps.conjugate_finite:
        raise ValueError("the dual functional needs p > 1")
    n_values = _check_n_values(n_values)
    bs = BallScan(scan, ())
    minus, plus = [], []
    for n in n_values:
        minus.append(bs.dual_from_values(hilb_envelope("-", n, bs.nodes), exps))
        plus.append(bs.dual_from_values(hilb_envelope("+", n, bs.nodes), exps))
    pred = max(0.0, 2.0 * (1.0 - exps.lam) / exps.p - 1.5)
    series = [_report(n_values, minus, pred, "h_minus"), _report(n_values, plus, pred, "h_plus")]
    if pred == 0.0:
        ok = all(s.consistent for s in series)
    else:
        # the exponent is reached only slowly; require growth alone
        ok = all(s.behaviour == "growing" for s in series)
    return ExperimentReport(
        "dual",
        _params_dict(params, exps, n_values, scan),
        series,
        "consistent" if ok else "inconsistent",
        "dual functional bound for the Hilb envelopes",
    )


def necessity_experiment(params: JacobiParams, exps: MorreyExponents, n_values=DEFAULT_N_VALUES,
                         scan: ScanSpec = DEFAULT_SCAN) -> ExperimentReport:
    """The two T_n witness combinations.

    * ``sign``:  ||p_n||_{1,0} ||p_n||_{p,lam}        (f = sgn p_n)
    * ``power``: ||p_n||_{q,0}^q ||p_n||_{p,lam} ||p_n||_{q,lam}^(-q/p)
      (f = sgn(p_n) |p_n|^(q-1))

    The cell is ``bounded`` when both fitted slopes are at most 0.05 and
    ``growing`` otherwise.  The verdict compares this with the region:
    bounded inside, growing outside.  On a boundary the slopes are reported
    together with logarithmic fits, and the verdict is ``boundary``.
    """
    if not exps.conjugate_finite:
        raise ValueError("the necessity witnesses need p > 1")
    n_values = _check_n_values(n_values)
    region = region_membership(exps.p, exps.lam)
    q = exps.q
    e_1 = MorreyExponents(1.0, 0.0)
    e_q0 = MorreyExponents(q, 0.0)
    e_ql = MorreyExponents(q, exps.lam)
    sign, power = [], []
    for n in n_values:
        bs, a = _jacobi_scan(params, n, scan)
        npl = bs.morrey_from_values(a, exps)
        sign.append(bs.morrey_from_values(a, e_1) * npl)
        nq0 = bs.morrey_from_values(a, e_q0)
        nql = bs.morrey_from_values(a, e_ql)
        power.append(nq0**q * npl * nql ** (-q / exps.p))
    s1 = _report(n_values, sign, predicted_norm_slope(exps.p, exps.lam), "sign")
    s2 = _report(n_values, power, predicted_power_witness_slope(exps.p, exps.lam), "power")
    growing = max(s1.fitted_log_slope, s2.fitted_log_slope) > SLOPE_TOL
    behaviour = "growing" if growing else "bounded"
    extras = {"behaviour": behaviour, "region": region.classification}
    if region.on_boundary:
        # (p_n)-norm powers that can grow like log n on the boundary
        extras["log_fit_sign"] = asdict(fit_log_growth(n_values, np.asarray(sign) ** 4))
        extras["log_fit_power"] = asdict(fit_log_growth(n_values, power))
        verdict = "boundary"
    elif region.inside:
        verdict = "consistent" if behaviour == "bounded" else "inconsistent"
    else:
        verdict = "consistent" if behaviour == "growing" else "inconsistent"
    return ExperimentReport(
        "necessity",
        _params_dict(params, exps, n_values, scan),
        [s1, s2],
        verdict,
        "uniform bound on T_n tested with sign and power witnesses",
        extras,
    )


def _power_integral(f, p, a, b, breakpoints, grade_to, depth=60, order=8):
    """int_a^b |f|^p on panels split at ``breakpoints`` and graded toward ``grade_to``."""
    offs = 2.0 ** -np.arange(1, depth + 1, dtype=float)
    pts = [np.array([a, b]), np.asarray(breakpoints, dtype=float), np.linspace(a, b, 65)]
    for g in grade_to:
        pts += [g + offs * (b - a), g - offs * (b - a)]
    pts = np.concatenate(pts)
    pts = np.unique(pts[(pts >= a) & (pts <= b)])
    nodes, weights, _ = gauss_legendre_panels(pts, order)
    return float(np.dot(weights, np.abs(evaluate_on(f, nodes)) ** p))


def _fourth_power_integral(params, n):
    """int_{-1}^{1/2} p_n^4."""
    roots = jacobi_roots(params, n)
    return _power_integral(lambda x: jacobi_function(params, n, x), 4.0, -1.0, 0.5, roots, (-1.0,))


def boundary_divergence_experiment(params: JacobiParams, exps: MorreyExponents, n_values=DEFAULT_N_VALUES,
                                   scan: ScanSpec = DEFAULT_SCAN, r_levels=tuple(range(2, 21))) -> ExperimentReport:
    """Growth witnesses on the two boundary lines.

    Lower boundary p = 4(1-lam)/3: ``int_{-1}^{1/2} p_n^4`` times
    ``||(1-x^2)^(1/2) p_n^(alpha+1,beta+1) chi_(1/2,1)||_{p,lam}`` against
    ``log n``; the companion ``||(1+t)^(1/4) chi_(-1,1/2)||_{p,lam}`` is
    reported as the bound of the right-hand side.

    Upper boundary p = 4(1-lam): for lam > 0, with r = 1 - 2^-k over
    ``r_levels``, the quantity ``-log(1-r) ||(1-t)^(-1/4) chi_(r,1)|| /
    ||(1-t)^(-1/4) chi_(0,r)||`` against k (the norm ratio itself stays
    bounded).  For lam = 0 that ratio is infinite, and instead
    ``(||p_n||_{1,0} ||p_n||_{4,0})^4`` is fitted against ``log n``.
    """
    region = region_membership(exps.p, exps.lam)
    if not region.on_boundary:
        raise ValueError(f"(p, lambda) = ({exps.p}, {exps.lam}) is {region.classification}, not on a boundary")
    n_values = _check_n_values(n_values)
    pars = _params_dict(params, exps, n_values, scan, boundary=region.classification)
    extras = {}
    if region.classification == "lower_boundary":
        shifted = params.shifted()
        integrals, products = [], []
        for n in n_values:
            I = _fourth_power_integral(params, n)
            g = lambda x, n=n: np.where(  # noqa: E731
                x > 0.5, np.sqrt(np.maximum(1.0 - x * x, 0.0)) * jacobi_function(shifted, n, x), 0.0
            )
            rts = jacobi_roots(shifted, n)
            bs = BallScan(scan, np.concatenate(([0.5], rts[rts > 0.5])))
            M = bs.morrey_from_values(np.abs(g(bs.nodes)), exps)
            integrals.append(I)
            products.append(I * M)
        s_int = _report(n_values, integrals, 0.0, "fourth_power_integral", log_power=1.0)
        s_prod = _report(n_values, products, 0.0, "lower_boundary_product", log_power=1.0)
        bs = BallScan(scan, (0.5,))
        env = bs.morrey_from_values(np.where(bs.nodes < 0.5, (1.0 + bs.nodes) ** 0.25, 0.0), exps)
        extras["rhs_bound"] = env
        series = [s_int, s_prod]
        ok = s_int.consistent and s_prod.consistent
    elif exps.lam == 0.0:
        vals = []
        for n in n_values:
            bs, a = _jacobi_scan(params, n, scan)
            vals.append(bs.morrey_from_values(a, MorreyExponents(1.0, 0.0)) * bs.morrey_from_values(a, exps))
        s = _report(n_values, vals, 0.0, "sign_combination", log_power=4.0)
        series = [s]
        ok = s.consistent
    else:
        ks = [int(k) for k in r_levels]
        ratios, products = [], []
        for k in ks:
            r = 1.0 - 2.0**-k
            bs = BallScan(scan, (0.0, r))
            w = (1.0 - bs.nodes) ** -0.25
            outer = bs.morrey_from_values(np.where(bs.nodes > r, w, 0.0), exps)
            inner = bs.morrey_from_values(np.where((bs.nodes > 0.0) & (bs.nodes < r), w, 0.0), exps)
            ratios.append(outer / inner)
            products.append(-math.log1p(-r) * outer / inner)
        idx = [2**k for k in ks]
        s_ratio = _report(idx, ratios, 0.0, "norm_ratio")
        s_prod = _report(idx, products, 0.0, "log_weighted_ratio", log_power=1.0)
        series = [s_ratio, s_prod]
        extras["index"] = "n_values hold 1/(1-r) = 2^k"
        ok = s_ratio.behaviour == "bounded" and s_prod.consistent
    return ExperimentReport(
        "boundary",
        pars,
        series,
        "consistent" if ok else "inconsistent",
        "divergence on the boundary lines",
        extras,
    )


def _window(exps):
    lo = (exps.lam - 1.0) / exps.p
    return lo, 1.0 + lo


def _near_side(xj, near, far):
    """Interval between distances ``near`` and ``far`` from ``xj``, on the side facing 0."""
    side = 1.0 if xj < 0.0 else -1.0
    a, b = sorted((xj + side * near, xj + side * far))
    return a, b


def _weighted_ratio(f, w, exps, scan, cut=None):
    """||w Hf||_{p,lam} / ||w f||_{p,lam}; with ``cut = (xj, d)`` the numerator
    is restricted to |x - xj| > d."""
    bps = list(f.breakpoints) + list(w.points)
    if cut is not None:
        bps += [cut[0] - cut[1], cut[0] + cut[1]]
    bs = BallScan(scan, bps)
    x = bs.nodes
    num = w(x) * hilbert_transform(f, x)
    if cut is not None:
        num = np.where(np.abs(x - cut[0]) > cut[1], num, 0.0)
    den = w(x) * f(x)
    return bs.morrey_from_values(np.abs(num), exps) / bs.morrey_from_values(np.abs(den), exps)


def _hat(a, b):
    """Continuous hat function on (a, b) peaking at the midpoint."""
    return SampledFunction(np.array([a, 0.5 * (a + b), b]), np.array([0.0, 1.0, 0.0]), f"hat({a:g},{b:g})")


def hilbert_weight_experiment(weight: PowerWeight, exps: MorreyExponents, scan: ScanSpec = DEFAULT_SCAN,
                              levels=None) -> ExperimentReport:
    """Weighted Hilbert transform ratios ||w Hf||_{p,lam} / ||w f||_{p,lam}.

    For every weight point x_j with exponent gamma_j a family indexed by
    eps = 2^-k is used:

    * gamma_j in [(lam-1)/p, 1 + (lam-1)/p) or above it: concentrating
      hats f_eps between distances eps/16 and eps from x_j.  Inside the
      window, and at its lower end, the ratio is scale invariant (slope 0);
      above it it grows like eps^-(gamma_j - 1 + (1-lam)/p).
    * gamma_j below the lower end: w Hf is not in the space for any f with
      Hf(x_j) != 0, so the ratio is infinite.  The family is then a fixed
      hat on the interval between distances 1/32 and 1/2 from x_j, with the
      numerator restricted to |x - x_j| > eps; it grows like
      eps^-(-gamma_j - (1-lam)/p).

    Slopes are with respect to 1/eps.  ``n_values`` of the series hold 2^k.
    The window is open, so a point at its lower end is not ``in_window``.
    Concentrating indicators would give Hf a log singularity at x_j, which
    makes the numerator infinite exactly at that end; the continuous hats
    keep it finite, and the family stays scale invariant there.
    """
    if len(weight) == 0:
        raise ValueError("the weight needs at least one point")
    in_window = True
    series = []
    for xj, g in zip(weight.points, weight.exponents):
        lo, hi = _window(exps)
        endpoint = abs(g - lo) <= TIE_TOL
        below = g < lo and not endpoint
        if levels is not None:
            ks = [int(k) for k in levels]
        elif below:
            ks = list(range(2, 41, 2))
        else:
            ks = list(range(2, 21))
        ratios = []
        if below:
            in_window = False
            f = _hat(*_near_side(xj, 1.0 / 32.0, 0.5))
            pred = -g - (1.0 - exps.lam) / exps.p
            for k in ks:
                ratios.append(_weighted_ratio(f, weight, exps, scan, cut=(xj, 2.0**-k)))
        else:
            if endpoint:
                in_window = False
                pred = 0.0
            elif g >= hi:
                in_window = False
                pred = g - 1.0 + (1.0 - exps.lam) / exps.p
            else:
                pred = 0.0
            for k in ks:
                f = _hat(*_near_side(xj, 2.0 ** -(k + 4), 2.0**-k))
                ratios.append(_weighted_ratio(f, weight, exps, scan))
        series.append(_report([2**k for k in ks], ratios, pred, f"x={xj:g},gamma={g:g}"))
    growth = [s.measured[-1] / s.measured[0] for s in series]
    # predicted growth is approached slowly; require growth alone there
    ok = all(s.behaviour == "growing" if s.predicted_slope > 0 else s.consistent for s in series)
    if in_window:
        ok = ok and all(s.behaviour == "bounded" for s in series)
    return ExperimentReport(
        "hilbert",
        {
            "points": list(weight.points),
            "exponents": list(weight.exponents),
            "p": exps.p,
            "lambda": exps.lam,
            "scan": asdict(scan),
        },
        series,
        "consistent" if ok else "inconsistent",
        "power-weight window for the Hilbert transform",
        {"in_window": in_window, "growth_factors": growth},
    )


def convergence_experiment(f, params: JacobiParams, exps: MorreyExponents, n_values=(4, 8, 16, 32),
                           scan: ScanSpec = DEFAULT_SCAN, breakpoints=None, tol=1e-6) -> GrowthReport:
    """||S_n f - f||_{p,lam} for each n.

    Consistent when (p, lam) is inside the region and the error decreases
    (negative fitted slope) or already sits below ``tol``.  Outside the
    region no claim is made and the run is labelled consistent.
    """
    n_values = _check_n_values(n_values)
    bps = [] if breakpoints is None else list(np.atleast_1d(breakpoints))
    bps += list(getattr(f, "breakpoints", []))
    coeffs = coefficients(f, params, n_values[-1], breakpoints=bps or None)
    bs = BallScan(scan, bps)
    fx = evaluate_on(f, bs.nodes)
    errs = [bs.morrey_from_values(np.abs(partial_sum(coeffs, n, bs.nodes) - fx), exps) for n in n_values]
    slope, res = fit_log_slope(n_values, errs)
    decreasing = slope < 0 or errs[-1] <= tol
    ok = decreasing or not region_membership(exps.p, exps.lam).inside
    return GrowthReport(
        n_values,
        errs,
        slope,
        res,
        0.0,
        "consistent" if ok else "inconsistent",
        "partial_sum_error",
        "decaying" if decreasing else _behaviour(slope),
    )


def mnt_check(g, params: JacobiParams, exps: MorreyExponents, n_values=DEFAULT_N_VALUES,
              scan: ScanSpec = DEFAULT_SCAN, breakpoints=None) -> ExperimentReport:
    """Compare ||(1-x^2)^(-1/4) g||_{p,lam} with liminf_n ||p_n g||_{p,lam}.

    The liminf is approximated by the minimum over the final half of
    ``n_values``.  Reported: both sides, their ratio, and the relative
    spread of ||p_n g|| over that tail as a stability measure.
    """
    n_values = _check_n_values(n_values)
    bps = [] if breakpoints is None else list(np.atleast_1d(breakpoints))
    bps += list(getattr(g, "breakpoints", []))
    bs = BallScan(scan, bps)
    gx = np.abs(evaluate_on(g, bs.nodes))
    with np.errstate(divide="ignore"):
        env = (1.0 - bs.nodes**2) ** -0.25
    lhs = bs.morrey_from_values(env * gx, exps)
    rhs = []
    for n in n_values:
        bn = BallScan(scan, list(jacobi_roots(params, n)) + bps)
        rhs.append(bn.morrey_from_values(np.abs(jacobi_function(params, n, bn.nodes)) * np.abs(evaluate_on(g, bn.nodes)), exps))
    tail = np.asarray(rhs[len(rhs) // 2:])
    liminf = float(tail.min())
    if lhs == 0.0 and liminf == 0.0:
        ratio, spread = 0.0, 0.0
    else:
        ratio = lhs / liminf if liminf > 0 else math.inf
        spread = float((tail.max() - tail.min()) / tail.max())
    s = _report(n_values, rhs, 0.0, "p_n_times_g")
    ok = math.isfinite(ratio)
    return ExperimentReport(
        "mnt",
        _params_dict(params, exps, n_values, scan),
        [s],
        "consistent" if ok else "inconsistent",
        "liminf lower bound for weighted norms of p_n g",
        {"lhs": lhs, "liminf": liminf, "ratio": ratio, "tail_spread": spread},
    )
