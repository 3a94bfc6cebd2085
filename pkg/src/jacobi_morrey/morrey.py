"""Morrey norms on (-1, 1), the dual-type functional, and power weights.

    ||f||_{p,lam} = sup_{x, r} ( r^-lam int_{B(x,r)} |f|^p )^(1/p),
    B(x, r) = {t in (-1, 1) : |t - x| <= r}.

The supremum over the continuum of balls is replaced by a scan over a finite
family of balls (:class:`ScanSpec`), so every reported norm is a lower bound
of the true one.  Ball integrals are differences of a cumulative integral
built from composite Gauss-Legendre panels whose break points contain every
ball end point, every declared break point of ``f`` and geometric gradings
toward +-1 and the break points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import SampledFunction, StepFunction, gauss_legendre_panels

__all__ = [
    "MorreyExponents",
    "PowerWeight",
    "ScanSpec",
    "DEFAULT_SCAN",
    "BallScan",
    "evaluate_on",
    "morrey_norm",
    "morrey_norm_estimate",
    "dual_functional",
    "weighted_morrey_norm",
    "lp_norm",
]

# radii below 2^-MAX_RADIUS_LEVEL are not scanned (double precision near +-1)
MAX_RADIUS_LEVEL = 40
# panels are graded toward break points this many halvings below the
# smallest radius
_GRADING_MARGIN = 12
_MAX_GRADING_DEPTH = 50
_ANCHOR_FACTORS = (0.5, 1.0, 2.0)
# break points listed up to this count also serve as ball centres
_MAX_ANCHOR_POINTS = 32


@dataclass(frozen=True)
class MorreyExponents:
    """Integrability exponent ``p`` and Morrey parameter ``lam``."""

    p: float
    lam: float = 0.0

    def __post_init__(self):
        if not (1.0 <= self.p < math.inf):
            raise ValueError(f"Morrey exponent needs 1 <= p < inf, got p = {self.p}")
        if not (0.0 <= self.lam < 1.0):
            raise ValueError(f"Morrey parameter needs 0 <= lambda < 1, got lambda = {self.lam}")
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def q(self) -> float:
        """Conjugate exponent; ``inf`` when p = 1."""
        return math.inf if self.p == 1.0 else self.p / (self.p - 1.0)

    @property
    def conjugate_finite(self) -> bool:
        return self.p > 1.0


@dataclass(frozen=True)
class PowerWeight:
    """w(x) = prod_j |x - x_j|^gamma_j."""

    points: tuple = ()
    exponents: tuple = ()

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        exps = tuple(float(g) for g in self.exponents)
        if len(pts) != len(exps):
            raise ValueError("power weight needs one exponent per point")
        if any(abs(x) > 1.0 for x in pts):
            raise ValueError("power weight points must lie in [-1, 1]")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("power weight points must be strictly increasing")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def endpoints(cls, gamma_minus, gamma_plus):
        """(1 + x)^gamma_minus (1 - x)^gamma_plus."""
        return cls((-1.0, 1.0), (gamma_minus, gamma_plus))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        with np.errstate(divide="ignore"):
            for xj, g in zip(self.points, self.exponents):
                out = out * np.abs(x - xj) ** g
        return out

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class ScanSpec:
    """Discretization of the supremum over balls.

    Centres are graded algebraically toward +-1 (distance ``u**endpoint_clustering``
    for ``u`` on a uniform grid of ``center_count // 2`` steps), plus, for each
    radius r, the anchored centres +-(1 - k r) for k in (0.5, 1, 2).  Radii are
    dyadic, r = 2 * 2^-j for j = 0..radius_levels.  Doubling ``center_count``
    and ``radius_levels`` produces a superset of balls.
    """

    center_count: int = 64
    radius_levels: int = 28
    endpoint_clustering: float = 3.0

    def __post_init__(self):
        if int(self.center_count) != self.center_count or self.center_count < 8:
            raise ValueError("center_count must be an integer >= 8")
        if int(self.radius_levels) != self.radius_levels or self.radius_levels < 4:
            raise ValueError("radius_levels must be an integer >= 4")
        if not self.endpoint_clustering >= 1.0:
            raise ValueError("endpoint_clustering must be >= 1")

    def refined(self) -> "ScanSpec":
        return ScanSpec(2 * self.center_count, 2 * self.radius_levels, self.endpoint_clustering)

    @property
    def radii(self):
        levels = min(self.radius_levels, MAX_RADIUS_LEVEL)
        return 2.0 * 2.0 ** -np.arange(levels + 1, dtype=float)

    def centers(self, anchor_points=()):
        half = self.center_count // 2
        u = np.arange(half + 1) / half
        d = u**self.endpoint_clustering
        pts = [1.0 - d, d - 1.0]
        r = self.radii
        for k in _ANCHOR_FACTORS:
            pts += [1.0 - k * r, k * r - 1.0]
        for b in anchor_points:
            pts += [np.array([b]), b + r, b - r]
        c = np.concatenate(pts)
        return np.unique(c[np.abs(c) <= 1.0])


DEFAULT_SCAN = ScanSpec()


def _grading_depth(b, depth):
    # keep panels wide enough that their nodes stay distinct from b
    floor = 1024.0 * np.spacing(max(abs(b), 2.0**-20))
    return min(depth, int(-math.log2(floor)))


def _grading(points, depth):
    out = []
    for b in points:
        offs = 2.0 ** -np.arange(1, _grading_depth(b, depth) + 1, dtype=float)
        out += [b + offs, b - offs]
    return np.concatenate(out) if out else np.empty(0)


def _merge_close(pts, keep):
    """Drop points within a few hundred ulps of their left neighbour.

    Ball ends such as (b + r) - r land an ulp away from a break point b; the
    sliver panel between them would put quadrature nodes on b itself.
    Points in ``keep`` win over the neighbour they collide with.
    """
    close = np.diff(pts) <= 256.0 * np.spacing(np.abs(pts[1:]))
    if not np.any(close):
        return pts
    out = [pts[0]]
    for x, c in zip(pts[1:], close):
        if not c:
            out.append(x)
        elif x in keep:
            out[-1] = x
    return np.array(out)


class BallScan:
    """Ball family plus an integration partition adapted to it.

    Build once per (scan, break points) and reuse for several integrands and
    exponents.
    """

    def __init__(self, scan: ScanSpec = DEFAULT_SCAN, breakpoints=(), order=8, base_panels=256):
        self.scan = scan
        bps = np.unique(np.asarray(breakpoints, dtype=float).ravel())
        bps = bps[np.abs(bps) <= 1.0]
        anchors = bps[np.abs(bps) < 1.0] if bps.size <= _MAX_ANCHOR_POINTS else ()
        self.radii = scan.radii
        self.centers = scan.centers(anchors)
        cc, rr = np.meshgrid(self.centers, self.radii, indexing="ij")
        self.ball_center = cc.ravel()
        self.ball_radius = rr.ravel()
        lo = np.maximum(self.ball_center - self.ball_radius, -1.0)
        hi = np.minimum(self.ball_center + self.ball_radius, 1.0)

        levels = self.radii.size - 1
        depth = min(_MAX_GRADING_DEPTH, levels + _GRADING_MARGIN)
        singular = [-1.0, 1.0] + list(anchors) + [b for b in bps if abs(b) == 1.0]
        pts = np.concatenate(
            (
                np.linspace(-1.0, 1.0, base_panels + 1),
                _grading(singular, depth),
                bps,
                lo,
                hi,
            )
        )
        self._graded = [(b, _grading_depth(b, depth)) for b in singular]
        pts = _merge_close(np.unique(np.clip(pts, -1.0, 1.0)), set(bps) | {-1.0, 1.0})
        self.points = pts
        self.nodes, self.weights, self.panel = gauss_legendre_panels(pts, order)
        self.order = order
        self.lo_idx = np.searchsorted(pts, lo)
        self.hi_idx = np.searchsorted(pts, hi)
        self.lo, self.hi = lo, hi

    @property
    def ball_count(self):
        return self.ball_center.size

    def _cumulative(self, density):
        per_panel = np.add.reduceat(self.weights * density, np.arange(0, density.size, self.order))
        left = np.concatenate(([0.0], np.cumsum(per_panel)))
        right = np.concatenate((np.cumsum(per_panel[::-1])[::-1], [0.0]))
        return left, right

    def ball_integrals(self, density):
        """int_{B} density for every scanned ball (density given at ``self.nodes``)."""
        left, right = self._cumulative(density)
        a, b = self.lo_idx, self.hi_idx
        from_left = left[b] - left[a]
        from_right = right[a] - right[b]
        # difference the cumulative sum that is smaller there
        use_left = left[b] <= right[a]
        return np.maximum(np.where(use_left, from_left, from_right), 0.0)

    def complement_integrals(self, density):
        """int over (-1, 1) minus B for every scanned ball."""
        left, right = self._cumulative(density)
        return left[self.lo_idx] + right[self.hi_idx]

    def morrey_from_values(self, absvals, exps: MorreyExponents):
        dens = absvals**exps.p
        ints = self.ball_integrals(dens)
        vals = self.ball_radius ** (-exps.lam) * ints
        return float(np.max(vals) ** (1.0 / exps.p))

    def argmax_ball(self, absvals, exps: MorreyExponents):
        dens = absvals**exps.p
        vals = self.ball_radius ** (-exps.lam) * self.ball_integrals(dens)
        i = int(np.argmax(vals))
        return float(self.ball_center[i]), float(self.ball_radius[i])

    def diverges(self, density):
        """True when ``density`` looks non-integrable at a graded point.

        Compares the masses of the three innermost dyadic shells
        [b + 2^-(k+1), b + 2^-k] on each side of every graded point: an
        integrable singularity |t - b|^-a shrinks them by 2^(a-1) per shell,
        while a >= 1 gives shells that do not shrink.  Exponents within about
        0.004 of 1 are reported as divergent.
        """
        left, _ = self._cumulative(density)
        pts = self.points
        for b, d in self._graded:
            for side in (1.0, -1.0):
                ends = [b + side * 2.0**-k for k in range(d - 3, d + 1)]
                if any(abs(e) > 1.0 for e in ends):
                    continue
                idx = np.searchsorted(pts, ends)
                if np.any(idx >= pts.size) or np.any(pts[np.minimum(idx, pts.size - 1)] != ends):
                    continue
                shells = np.abs(np.diff(left[idx]))
                if shells[-1] > 0 and shells[-1] >= 0.99 * shells[0]:
                    return True
        return False

    def dual_from_values(self, absvals, exps: MorreyExponents):
        if not exps.conjugate_finite:
            raise ValueError("the dual functional needs p > 1 (finite conjugate exponent)")
        q = exps.q
        dens = absvals**q
        if not np.isfinite(np.sum(self.weights * dens)) or self.diverges(dens):
            return math.inf
        comp = self.complement_integrals(dens).reshape(self.centers.size, self.radii.size)
        comp = np.maximum(comp, 0.0) ** (1.0 / q)
        s = exps.lam / exps.p
        r = self.radii
        # int_{r_{j+1}}^{r_j} t^(s-1) dt; the complement norm is frozen at the
        # inner radius of each dyadic cell and vanishes for r >= 2
        if s == 0.0:
            cell = np.full(r.size - 1, math.log(2.0))
        else:
            cell = (r[:-1] ** s - r[1:] ** s) / s
        totals = comp[:, 1:] @ cell
        return float(np.min(totals))


def evaluate_on(f, x):
    """Values of a callable, sampled or step function at ``x`` with a finiteness check."""
    if isinstance(f, SampledFunction):
        vals = f(x, extrapolate=True)
    else:
        vals = np.asarray(f(x), dtype=float)
        if vals.ndim == 0:
            vals = np.full(np.shape(x), float(vals))
    bad = ~np.isfinite(vals)
    if np.any(bad):
        raise FloatingPointError(f"non-finite integrand at t = {np.asarray(x)[bad][0]!r}")
    return vals


def _breakpoints_of(f, breakpoints):
    bps = list(np.atleast_1d(np.asarray(breakpoints, dtype=float))) if breakpoints is not None else []
    if isinstance(f, (SampledFunction, StepFunction)):
        bps += list(f.breakpoints)
    extra = getattr(f, "breakpoints", None)
    if extra is not None and not isinstance(f, (SampledFunction, StepFunction)):
        bps += list(np.atleast_1d(extra))
    return bps


def morrey_norm(f, exps: MorreyExponents, scan: ScanSpec = DEFAULT_SCAN, breakpoints=None, ball_scan=None):
    """Scan lower bound of the Morrey norm ``||f||_{p,lam}``.

    Parameters
    ----------
    f : callable, SampledFunction or StepFunction
    exps : MorreyExponents
    scan : ScanSpec
    breakpoints : sequence of float, optional
        Points where ``f`` is not smooth (kinks, jumps, zeros of |f|,
        integrable singularities).  Panels are split there and graded toward
        up to 32 of them, which also become ball centres.
    ball_scan : BallScan, optional
        Prebuilt scan to reuse; ``scan`` and ``breakpoints`` are then ignored.
    """
    bs = ball_scan or BallScan(scan, _breakpoints_of(f, breakpoints))
    vals = np.abs(evaluate_on(f, bs.nodes))
    return bs.morrey_from_values(vals, exps)


def morrey_norm_estimate(f, exps, scan=DEFAULT_SCAN, breakpoints=None):
    """Norm on ``scan`` and on its refinement, with the relative change.

    Returns ``(value, refined_value, relative_change)``; the refined value is
    the better lower bound.
    """
    a = morrey_norm(f, exps, scan, breakpoints)
    b = morrey_norm(f, exps, scan.refined(), breakpoints)
    rel = abs(b - a) / b if b > 0 else 0.0
    return a, b, rel


def dual_functional(g, exps: MorreyExponents, scan: ScanSpec = DEFAULT_SCAN, breakpoints=None, ball_scan=None):
    """Scanned ``||g||*_{q,lam} = inf_x int_0^inf r^(lam/p - 1) ||chi_{B(x,r)^c} g||_q dr``.

    The r-integral runs over the dyadic radius cells of the scan (truncated
    at the smallest radius and at r = 2, beyond which the complement is
    empty); the infimum is over the scan centres.  Returns ``math.inf`` when
    |g|^q is not integrable.
    """
    if not exps.conjugate_finite:
        raise ValueError("the dual functional needs p > 1 (finite conjugate exponent)")
    bs = ball_scan or BallScan(scan, _breakpoints_of(g, breakpoints))
    vals = np.abs(evaluate_on(g, bs.nodes))
    return bs.dual_from_values(vals, exps)


def weighted_morrey_norm(f, w: PowerWeight, exps: MorreyExponents, scan: ScanSpec = DEFAULT_SCAN, breakpoints=None):
    """``||w f||_{p,lam}`` with panels split and graded at the weight's points."""
    bps = _breakpoints_of(f, breakpoints) + list(w.points)
    if isinstance(f, SampledFunction):
        prod = lambda x: w(x) * f(x, extrapolate=True)  # noqa: E731
    else:
        prod = lambda x: w(x) * np.asarray(f(x), dtype=float)  # noqa: E731
    return morrey_norm(prod, exps, scan, bps)


def lp_norm(f, p, breakpoints=None, scan=DEFAULT_SCAN):
    """Plain L^p(-1, 1) norm on the same partition machinery (lambda = 0)."""
    return morrey_norm(f, MorreyExponents(p, 0.0), scan, breakpoints)
