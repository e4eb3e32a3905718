"""Quasi-geodesics in products D_r x S_{R,M} and the non-slim triangle family.

A curve built by :func:`build_gamma` moves its second coordinate along the
real axis in proportion to the D_r-distance travelled by the first one. As
long as the height gained is small compared with k_{D_r}(t0, t1) the disc
term dominates the product metric, and reparametrized by hyperbolic arc
length the curve is a (2, 0)-quasi-geodesic in any domain between
D_r x S_{R,M} and D x H.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .conformal import CAYLEY
from .domains import r_prime
from .errors import ConfigurationError, ConstructionRefused
from .metrics import (BIDISC, Curve, Disc, HalfStrip, Product, Pullback, dist_disc,
                      hyperbolic_length, metric_disc, metric_halfstrip, metric_strip)

# near r -> 1, r' is within 1e-6 of r and k_{D_r} keeps only ~10 digits
REL_SLACK = 1e-9


@dataclass(frozen=True)
class ComparisonConstant:
    """D(c): for real s >= M + D R the half-strip density is at most c times the strip's."""

    c: float
    D: float

    def check(self, R: float = 1.0, M: float = 0.0, points: int = 200) -> float:
        """Largest value of halfstrip/strip - c on a log grid of s >= M + D R."""
        s = M + R * self.D * np.geomspace(1.0, 1e4, points)
        ratios = [metric_halfstrip(R, M, x, 1.0) / metric_strip(R, x, 1.0) for x in s]
        return max(ratios) - self.c


def comparison_constant(c: float) -> ComparisonConstant:
    if not c > 1:
        raise ValueError(f"need c > 1, got {c!r}")
    return ComparisonConstant(c, math.log((c + 1) / (c - 1)) / math.pi)


@dataclass
class QuasiGeodesic:
    curve: Curve
    A: float
    B: float
    r: float
    R: float
    M: float
    t0: float
    t1: float
    a: float
    b: float
    c: float
    grid: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 1.0, 50))

    @property
    def ambient(self) -> Product:
        """The inscribed product D_r x S_{R,M} the construction lives in."""
        return Product(Disc(self.r), HalfStrip(self.R, self.M))

    def arc_params(self, n: int) -> np.ndarray:
        """n parameters equally spaced in D_r-distance of the first coordinate."""
        u0 = math.atanh(self.t0 / self.r)
        u1 = math.atanh(self.t1 / self.r)
        x = self.r * np.tanh(np.linspace(u0, u1, n))
        ts = (x - self.t0) / (self.t1 - self.t0)
        ts[0], ts[-1] = 0.0, 1.0
        return ts

    def points(self, ts) -> tuple[np.ndarray, np.ndarray]:
        pts = [self.curve.point(float(t)) for t in ts]
        return np.array([p[0] for p in pts]), np.array([p[1] for p in pts])


def height_budget(r: float, R: float, c: float, t0: float, t1: float) -> float:
    """Largest admissible b - a: (2R / (c pi)) k_{D_r}(t0, t1)."""
    return 2 * R / (c * math.pi) * dist_disc(r, t0, t1)


def build_gamma(r: float, R: float, M: float, t0: float, t1: float, a: float, b: float,
                c: float = 2.0, enforce: bool = True) -> QuasiGeodesic:
    """Curve from (t0, a) to (t1, b) with claimed quasi-geodesic constants (2, 0).

    With ``enforce=False`` the preconditions are skipped, which is only useful
    to exhibit what goes wrong when they fail.
    """
    D = comparison_constant(c).D
    if enforce:
        if not 0.5 < r < 1:
            raise ConstructionRefused(f"need 1/2 < r < 1, got r = {r!r}")
        rp = r_prime(r) * (1 + REL_SLACK)
        if not (abs(t0) <= rp and abs(t1) <= rp):
            raise ConstructionRefused(f"need -r' <= t0, t1 <= r' with r' = {r_prime(r)!r}")
        if t0 == t1:
            raise ConstructionRefused("need t0 != t1")
        if not a >= (M + D * R) * (1 - REL_SLACK):
            raise ConstructionRefused(f"need a >= M + D(c) R = {M + D * R!r}, got a = {a!r}")
        if not b >= a:
            raise ConstructionRefused("need b >= a")
        budget = height_budget(r, R, c, t0, t1)
        if not b - a <= budget * (1 + REL_SLACK):
            raise ConstructionRefused(f"need b - a <= 2R/(c pi) k_Dr(t0, t1) = {budget!r}, got {b - a!r}")
    K = dist_disc(r, t0, t1)
    span = t1 - t0
    lift = (b - a) / K

    def point(t):
        x = span * t + t0
        return complex(x), complex(lift * dist_disc(r, t0, x) + a)

    def tangent(t):
        x = span * t + t0
        return complex(span), complex(lift * abs(span) * r / (r * r - x * x))

    qg = QuasiGeodesic(Curve(0.0, 1.0, point, tangent), 2.0, 0.0, r, R, M, t0, t1, a, b, c)
    if enforce:
        ambient = qg.ambient
        for t in qg.grid:
            if not ambient.contains(point(float(t))):
                raise ConstructionRefused(f"curve leaves D_r x S_(R,M) at t = {t}")
    return qg


def max_condition_check(qg: QuasiGeodesic, points: int = 1000) -> float:
    """min over u of (D_r density term - half-strip density term) along the curve."""
    worst = math.inf
    for u in np.linspace(0.0, 1.0, points):
        x, y = qg.curve.point(float(u))
        vx, vy = qg.curve.tangent(float(u))
        disc = metric_disc(qg.r, x, vx)
        strip = metric_halfstrip(qg.R, qg.M, y, vy) if vy != 0 else 0.0
        worst = min(worst, disc - strip)
    return worst


@dataclass
class QGVerification:
    lower_slack: float
    upper_slack: float
    arclength: np.ndarray
    pairs: int

    @property
    def ok(self) -> bool:
        return self.lower_slack >= 0 and self.upper_slack >= 0


def verify_quasi_geodesic(qg: QuasiGeodesic, ambient=BIDISC, grid: int = 50,
                          tol: float = 1e-11) -> QGVerification:
    """Check A^-1|dtau| - B <= k <= A|dtau| + B on all grid pairs.

    tau is hyperbolic arc length in ``ambient``; ``ambient`` supplies both the
    infinitesimal metric and the distance (bidisc max formula, or the ball
    pullback on Omega).
    """
    ts = np.linspace(qg.curve.a, qg.curve.b, grid)
    pieces = [hyperbolic_length(qg.curve, ambient, (float(s), float(t)), tol)
              for s, t in zip(ts[:-1], ts[1:])]
    tau = np.concatenate(([0.0], np.cumsum(pieces)))
    pts = [qg.curve.point(float(t)) for t in ts]
    lower = upper = math.inf
    for i, j in itertools.combinations(range(grid), 2):
        k = ambient.distance(pts[i], pts[j])
        dtau = tau[j] - tau[i]
        lower = min(lower, k - (dtau / qg.A - qg.B))
        upper = min(upper, qg.A * dtau + qg.B - k)
    return QGVerification(lower, upper, tau, grid * (grid - 1) // 2)


# -- triangle family ------------------------------------------------------------

@dataclass
class TriangleReport:
    r: float
    R: float
    M: float
    c: float
    s0: float
    D: float
    r_prime: float
    a: float
    b: float
    gamma_minus: QuasiGeodesic
    gamma_plus: QuasiGeodesic
    alpha: QuasiGeodesic
    q: tuple[complex, complex]
    lower_bound: float = 0.0
    G_estimate: float | None = None
    grid_error: float | None = None

    @property
    def sides(self) -> list[QuasiGeodesic]:
        return [self.gamma_minus, self.gamma_plus, self.alpha]


def build_triangle(r: float, R: float = 1.0, M: float = 0.0, c: float = 2.0,
                   s0: float = math.tanh(1.0)) -> TriangleReport:
    """Two quasi-geodesics from (-r', a) and (r', a) up to (0, b), closed by the segment at height a.

    a = M + D(c) R and b = a + (2R / (c pi)) k_{D_r}(0, r') use the whole height budget.
    """
    rp = r_prime(r)
    if not 0 <= s0 < rp:
        raise ConfigurationError(f"need 0 <= s0 < r'(r) = {rp!r}, got s0 = {s0!r}")
    D = comparison_constant(c).D
    a = M + D * R
    b = a + height_budget(r, R, c, 0.0, rp)
    g_minus = build_gamma(r, R, M, -rp, 0.0, a, b, c)
    g_plus = build_gamma(r, R, M, rp, 0.0, a, b, c)
    alpha = build_gamma(r, R, M, -rp, rp, a, a, c)
    q = g_minus.curve.point(1 - s0 / rp)
    tr = TriangleReport(r, R, M, c, s0, D, rp, a, b, g_minus, g_plus, alpha, q)
    tr.lower_bound = slimness_lower_bound(tr)
    return tr


def slimness_lower_bound(tr: TriangleReport) -> float:
    """Half-plane distance from q to the base height a: a lower bound for k(q, alpha)."""
    num = dist_disc(tr.r, tr.r_prime, tr.s0)
    den = dist_disc(tr.r, tr.r_prime, 0.0)
    return 0.5 * math.log1p((tr.b - tr.a) / tr.a * num / den)


def ambient_kind(ambient) -> str:
    if ambient == BIDISC:
        return "bidisc"
    if isinstance(ambient, Pullback) and ambient.h == CAYLEY:
        return "omega"
    raise ValueError("slimness sweeps support the bidisc and the Omega pullback only")


@dataclass
class SlimnessEstimate:
    G: float
    grid_error: float
    per_side: list[float]


def slimness_estimate(tr: TriangleReport, ambient=BIDISC, per_side: int = 1000) -> SlimnessEstimate:
    """max over sampled points of each side of the distance to the other two sides.

    Distances to a side are minima over its samples, so the true slimness is
    at least ``G - grid_error`` where ``grid_error`` is the largest distance
    between consecutive samples on a side.
    """
    kind = ambient_kind(ambient)
    samples = [side.points(side.arc_params(per_side)) for side in tr.sides]
    per = []
    spacing = 0.0
    dist_many = {"bidisc": kernels.bidisc_dist_many, "omega": kernels.omega_dist_many}[kind]
    for i, (x1, x2) in enumerate(samples):
        others = [samples[j] for j in range(3) if j != i]
        o1 = np.concatenate([o[0] for o in others])
        o2 = np.concatenate([o[1] for o in others])
        per.append(float(np.max(kernels.min_dist_to_set(kind, x1, x2, o1, o2))))
        spacing = max(spacing, float(np.max(dist_many(x1[:-1], x2[:-1], x1[1:], x2[1:]))))
    tr.G_estimate = max(per)
    tr.grid_error = spacing
    return SlimnessEstimate(max(per), spacing, per)


def four_point_delta(points, distance=None, kind: str | None = None) -> float:
    """Largest four-point defect (max pair-sum minus the middle one, halved).

    ``distance`` is a callable on pairs of points; alternatively ``kind`` names
    a vectorized kernel ("ball", "omega" or "bidisc") for C^2 points.
    """
    n = len(points)
    if n < 4:
        raise ValueError("four_point_delta needs at least 4 points")
    if kind is not None:
        z = np.array([complex(p[0]) for p in points])
        w = np.array([complex(p[1]) for p in points])
        fn = {"ball": kernels.ball_dist_many, "omega": kernels.omega_dist_many,
              "bidisc": kernels.bidisc_dist_many}[kind]
        d = fn(z[:, None], w[:, None], z[None, :], w[None, :])
        np.fill_diagonal(d, 0.0)
    else:
        d = np.zeros((n, n))
        for i, j in itertools.combinations(range(n), 2):
            d[i, j] = d[j, i] = distance(points[i], points[j])
    idx = np.array(list(itertools.combinations(range(n), 4)))
    x, y, z_, w_ = idx.T
    sums = np.sort(np.stack([d[x, y] + d[z_, w_], d[x, z_] + d[y, w_], d[x, w_] + d[y, z_]]), axis=0)
    return float(np.max(sums[2] - sums[1]) / 2)


def triangle_sample_points(tr: TriangleReport, per_side: int = 6) -> list:
    """Vertices, q and evenly spaced points of every side."""
    ts = np.linspace(0.0, 1.0, per_side)
    pts = [tr.q]
    for side in tr.sides:
        x1, x2 = side.points(ts)
        pts.extend(zip(x1.tolist(), x2.tolist()))
    return pts
