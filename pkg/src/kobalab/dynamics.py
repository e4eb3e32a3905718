"""Explicit maps, semigroups and orbit statistics.

The central object is the parabolic self-map of the ball

    f(z, w) = ((1+z)/(3-z), sqrt2 e^{i theta} w / sqrt(3-z)),

conjugate through phi to g(zeta, y) = (e^{i theta} zeta, y + 1) on Omega, and
its continuous-time versions f_t (Cayley case) and the sector-family
semigroups built from h_beta. ``ell(z, w) = w / (sqrt2 sqrt(1-z))`` carries
every orbit to a rotation orbit in the disc.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .conformal import CAYLEY, SQRT2, HFamilyMap, inverse_cayley, phi_h, principal_sqrt, psi_h
from .errors import DomainViolation
from .metrics import BOUNDARY_GAP, dist_ball, dist_disc

Point = tuple[complex, complex]


def _in_ball(p: Point) -> bool:
    return 1.0 - math.hypot(abs(p[0]), abs(p[1])) > BOUNDARY_GAP


def _require_ball(p: Point) -> None:
    if not _in_ball(p):
        raise DomainViolation(f"{p!r} is not inside the unit ball")


# -- maps -----------------------------------------------------------------------

@dataclass(frozen=True)
class Phi:
    """Embedding of the ball onto Omega_h."""

    h: HFamilyMap = CAYLEY

    def __call__(self, p: Point) -> Point:
        _require_ball(p)
        return phi_h(self.h, complex(p[0]), complex(p[1]))


@dataclass(frozen=True)
class Psi:
    """Inverse of Phi; defined on C x h(D)."""

    h: HFamilyMap = CAYLEY

    def __call__(self, p: Point) -> Point:
        y = complex(p[1])
        if not self.h.in_image(y):
            raise DomainViolation(f"y = {y!r} is outside h(D)")
        return psi_h(self.h, complex(p[0]), y)


@dataclass(frozen=True)
class FDiscrete:
    theta: float = 0.0

    def __call__(self, p: Point) -> Point:
        _require_ball(p)
        z, w = complex(p[0]), complex(p[1])
        s = principal_sqrt(3 - z, "3-z")
        return (1 + z) / (3 - z), SQRT2 * cmath.exp(1j * self.theta) * w / s


@dataclass(frozen=True)
class FSemigroup:
    theta: float = 0.0
    t: float = 1.0

    def __call__(self, p: Point) -> Point:
        _require_ball(p)
        z, w = complex(p[0]), complex(p[1])
        t = self.t
        den = 2 + t - z * t
        s = principal_sqrt(den, "2+t-zt")
        return (t + z * (2 - t)) / den, SQRT2 * cmath.exp(1j * t * self.theta) * w / s


@dataclass(frozen=True)
class FHSemigroup:
    """f_t = phi_h^-1 o g_t o phi_h for the sector family."""

    h: HFamilyMap = CAYLEY
    theta: float = 0.0
    t: float = 1.0

    def __call__(self, p: Point) -> Point:
        _require_ball(p)
        z, w = complex(p[0]), complex(p[1])
        zt = self.h.inverse(self.h(z) + self.t)
        ratio = principal_sqrt(1 - zt, "1-z_t") / principal_sqrt(1 - z, "1-z")
        return zt, cmath.exp(1j * self.t * self.theta) * w * ratio


@dataclass(frozen=True)
class GSemigroup:
    theta: float = 0.0
    t: float = 1.0

    def __call__(self, p: Point) -> Point:
        return cmath.exp(1j * self.t * self.theta) * complex(p[0]), complex(p[1]) + self.t


@dataclass(frozen=True)
class CayleyPhi:
    """(z, w) -> (z, (w-1)/(w+1)), from D x H onto the bidisc D x D."""

    def __call__(self, p: Point) -> Point:
        w = complex(p[1])
        if not w.real > 0:
            raise DomainViolation("second coordinate must lie in the right half-plane")
        return complex(p[0]), inverse_cayley(w)


@dataclass(frozen=True)
class ModelEll:
    """Semi-conjugacy ell(z, w) = w / (sqrt2 sqrt(1-z)) onto the disc."""

    def __call__(self, p: Point) -> complex:
        z, w = complex(p[0]), complex(p[1])
        if abs(z) >= 1:
            raise DomainViolation("branch cut contact: z = 1")
        return w / (SQRT2 * principal_sqrt(1 - z, "1-z"))


@dataclass(frozen=True)
class SliceMap:
    """Restriction of f to the invariant slice {w = 0}."""

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        if not abs(z) < 1:
            raise DomainViolation(f"{z!r} is outside the disc")
        return (1 + z) / (3 - z)


@dataclass(frozen=True)
class BallAutomorphism:
    """Hyperbolic automorphism fixing (+-1, 0); a control case with dilation (1-a)/(1+a)."""

    a: float = 0.5

    def __call__(self, p: Point) -> Point:
        _require_ball(p)
        z, w = complex(p[0]), complex(p[1])
        den = 1 + self.a * z
        return (z + self.a) / den, math.sqrt(1 - self.a**2) * w / den


HolomorphicMap = (Phi | Psi | FDiscrete | FSemigroup | FHSemigroup | GSemigroup
                  | CayleyPhi | ModelEll | SliceMap | BallAutomorphism)


def evaluate(f, p):
    return f(p)


ell = ModelEll()


# -- vectorized evaluators -----------------------------------------------------

def f_semigroup_many(theta: float, t: float, z, w):
    den = 2.0 + t - z * t
    return (t + z * (2.0 - t)) / den, SQRT2 * np.exp(1j * t * theta) * w / np.sqrt(den)


def h_many(h: HFamilyMap, z):
    c = (1.0 + z) / (1.0 - z)
    return c if h.beta == 1.0 else c**h.beta


def h_inverse_many(h: HFamilyMap, y):
    big_y = y if h.beta == 1.0 else y ** (1.0 / h.beta)
    return (big_y - 1.0) / (big_y + 1.0)


def fh_semigroup_many(h: HFamilyMap, theta: float, t: float, z, w):
    zt = h_inverse_many(h, h_many(h, z) + t)
    return zt, np.exp(1j * t * theta) * w * np.sqrt(1.0 - zt) / np.sqrt(1.0 - z)


def phi_many(h: HFamilyMap, z, w):
    return w / (SQRT2 * np.sqrt(1.0 - z)), h_many(h, z)


def psi_many(h: HFamilyMap, zeta, y):
    x = h_inverse_many(h, y)
    return x, SQRT2 * zeta * np.sqrt(1.0 - x)


def ell_many(z, w):
    return w / (SQRT2 * np.sqrt(1.0 - z))


def random_ball_points(n: int, rng: np.random.Generator, max_norm: float = 1.0):
    """Uniform samples in the ball of radius ``max_norm`` in C^2."""
    g = rng.standard_normal((n, 4))
    g /= np.linalg.norm(g, axis=1)[:, None]
    g *= (max_norm * rng.random(n) ** 0.25)[:, None]
    return g[:, 0] + 1j * g[:, 1], g[:, 2] + 1j * g[:, 3]


# -- orbits ---------------------------------------------------------------------

@dataclass
class Orbit:
    points: list
    truncated: bool = False


def _is_f_family(f) -> bool:
    return isinstance(f, (FDiscrete, FSemigroup))


def _f_params(f) -> tuple[float, float]:
    return (f.theta, 1.0) if isinstance(f, FDiscrete) else (f.theta, f.t)


def orbit(f, p, n: int) -> Orbit:
    """(p, f p, ..., f^n p); stops early with ``truncated`` if a point hits the boundary."""
    if _is_f_family(f):
        _require_ball(p)
        theta, t = _f_params(f)
        zs, ws = kernels.f_orbit(complex(p[0]), complex(p[1]), theta, t, n)
        norms = np.hypot(np.abs(zs), np.abs(ws))
        bad = np.nonzero(~(1.0 - norms > BOUNDARY_GAP))[0]
        stop = int(bad[0]) if bad.size else n + 1
        return Orbit(list(zip(zs[:stop].tolist(), ws[:stop].tolist())), truncated=bool(bad.size))
    points = [p]
    for _ in range(n):
        try:
            p = f(p)
        except DomainViolation:
            return Orbit(points, truncated=True)
        points.append(p)
    return Orbit(points)


# -- hyperbolic step ------------------------------------------------------------

@dataclass
class StepEstimate:
    """Consecutive-iterate distances d_n = k(f^n p, f^(n+1) p) and their limit.

    ``limit`` is a Richardson extrapolation in 1/n over the checkpoints
    n/4, n/2, n; ``converged`` means two successive extrapolations agreed to
    the requested tolerance.
    """

    distances: np.ndarray
    limit: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list)


def _richardson(d: np.ndarray, n: int) -> float:
    r1 = 2 * d[n // 2] - d[n // 4]
    r2 = 2 * d[n] - d[n // 2]
    return (4 * r2 - r1) / 3


def _ball_distances(f, p, n: int) -> np.ndarray:
    if _is_f_family(f):
        theta, t = _f_params(f)
        zs, ws = kernels.f_orbit(complex(p[0]), complex(p[1]), theta, t, n + 1)
        return kernels.consecutive_ball_dist(zs, ws)
    pts = orbit(f, p, n + 1).points
    return np.array([dist_ball(a, b) for a, b in zip(pts[:-1], pts[1:])])


def step(f, p, tol: float = 1e-9, max_n: int = 10**5, first_checkpoint: int = 64) -> StepEstimate:
    """Hyperbolic step of a self-map of the ball at p."""
    _require_ball(p)
    d = _ball_distances(f, p, first_checkpoint)
    n = first_checkpoint
    history = [(n, _richardson(d, n))]
    converged = False
    while 2 * n <= max_n:
        n *= 2
        # the orbit is recomputed from p: cheap, and keeps the sequence bitwise reproducible
        d = _ball_distances(f, p, n)
        history.append((n, _richardson(d, n)))
        if abs(history[-1][1] - history[-2][1]) < tol:
            converged = True
            break
    return StepEstimate(d, max(history[-1][1], 0.0), n, converged, history)


def model_step(theta: float, p) -> float:
    """k_D(ell(p), e^{i theta} ell(p)): the step predicted by the semi-model."""
    z = ell(p)
    return dist_disc(1.0, z, cmath.exp(1j * theta) * z)


# -- dilation -------------------------------------------------------------------

@dataclass
class DilationEstimate:
    """Ratios (1-|f(z)|)/(1-|z|) along one approach sequence.

    The estimate bounds the liminf from above along this sequence only; it is
    not a search over all approaches to the boundary point.
    """

    points: list
    ratios: np.ndarray
    running_liminf: np.ndarray
    estimate: float
    note: str = "sequence-restricted: an upper bound for the true liminf"


def radial_slice_approach(n: int = 27) -> list[Point]:
    # stops near 1 - 1e-8: closer in, 1 - |f(z)| loses too many digits
    return [(1.0 - 10.0 ** (-0.3 * k), 0j) for k in range(1, n + 1)]


def _one_minus_norm(p) -> float:
    # 1 - |p| = (1 - |p|^2)/(1 + |p|); for real z = 1 - e use e(2 - e)
    z, w = complex(p[0]), complex(p[1])
    nz = abs(z)
    one_minus_z2 = (1 - nz) * (1 + nz)
    return (one_minus_z2 - abs(w) ** 2) / (1 + math.hypot(nz, abs(w)))


def dilation(f, approach: list | None = None) -> DilationEstimate:
    pts = approach if approach is not None else radial_slice_approach()
    ratios = np.array([_one_minus_norm(f(p)) / _one_minus_norm(p) for p in pts])
    running = np.minimum.accumulate(ratios[::-1])[::-1]
    tail = ratios[3 * len(ratios) // 4:]
    return DilationEstimate(list(pts), ratios, running, float(tail.min()))


# -- convergence type -----------------------------------------------------------

@dataclass
class Classification:
    kind: str  # "radial", "tangential" or "indeterminate"
    angles: np.ndarray
    ratios: np.ndarray


def classify_convergence(points, min_length: int = 8) -> Classification:
    """Radial vs tangential approach to (1, 0) from arg(1 - z_n) and |w_n|^2/|1 - z_n|."""
    z = np.array([complex(p[0]) for p in points])
    w = np.array([complex(p[1]) for p in points])
    gap = 1.0 - z
    angles = np.abs(np.angle(gap))
    ratios = np.abs(w) ** 2 / np.abs(gap)
    if len(points) < min_length:
        return Classification("indeterminate", angles, ratios)
    tail = ratios[3 * len(ratios) // 4:]
    if angles[-1] < 0.01 and ratios[-1] < 0.01:
        kind = "radial"
    elif (tail > 0.1).all():
        kind = "tangential"
    else:
        kind = "indeterminate"
    return Classification(kind, angles, ratios)


# -- defect suites --------------------------------------------------------------

def _f_many(h: HFamilyMap | None, theta: float, t: float, z, w):
    if h is None:
        return f_semigroup_many(theta, t, z, w)
    return fh_semigroup_many(h, theta, t, z, w)


def semigroup_defect(theta: float, t: float, s: float, samples: int = 10**4,
                     h: HFamilyMap | None = None, seed: int = 0) -> float:
    """max |f_{t+s}(p) - f_t(f_s(p))| over random p in the ball."""
    if t < 0 or s < 0:
        raise ValueError("semigroup times must be non-negative")
    z, w = random_ball_points(samples, np.random.default_rng(seed))
    a1, a2 = _f_many(h, theta, t + s, z, w)
    b1, b2 = _f_many(h, theta, t, *_f_many(h, theta, s, z, w))
    return float(np.max(np.hypot(np.abs(a1 - b1), np.abs(a2 - b2))))


def semimodel_defect(theta: float, t: float, samples: int = 10**4, h: HFamilyMap | None = None,
                     seed: int = 0, theta_error: float = 0.0) -> float:
    """max |ell(f_t p) - e^{i t theta} ell(p)|.

    ``theta_error`` perturbs the rotation inside f only (fault injection).
    """
    z, w = random_ball_points(samples, np.random.default_rng(seed))
    fz, fw = _f_many(h, theta + theta_error, t, z, w)
    return float(np.max(np.abs(ell_many(fz, fw) - np.exp(1j * t * theta) * ell_many(z, w))))


def conjugacy_defect(theta: float, samples: int = 10**4, t_max: float = 10.0,
                     h: HFamilyMap = CAYLEY, seed: int = 0) -> float:
    """max |psi(g_t(phi(p))) - f_t(p)| over random p and t in [0, t_max]."""
    rng = np.random.default_rng(seed)
    z, w = random_ball_points(samples, rng)
    t = rng.random(samples) * t_max
    zeta, y = phi_many(h, z, w)
    a1, a2 = psi_many(h, np.exp(1j * t * theta) * zeta, y + t)
    b1, b2 = _f_many(None if h.beta == 1.0 else h, theta, t, z, w)
    return float(np.max(np.hypot(np.abs(a1 - b1), np.abs(a2 - b2))))


def schwarz_pick_excess(map_many, samples: int = 10**4, seed: int = 0) -> float:
    """max of k(f p, f q) - k(p, q) over random pairs; should not exceed rounding."""
    rng = np.random.default_rng(seed)
    p1, p2 = random_ball_points(samples, rng, max_norm=0.999)
    q1, q2 = random_ball_points(samples, rng, max_norm=0.999)
    fp1, fp2 = map_many(p1, p2)
    fq1, fq2 = map_many(q1, q2)
    return float(np.max(kernels.ball_dist_many(fp1, fp2, fq1, fq2)
                        - kernels.ball_dist_many(p1, p2, q1, q2)))


def step_model_defect(theta: float, samples: int = 100, seed: int = 0, tol: float = 1e-9,
                      max_n: int = 10**5) -> float:
    """max |step(f, p) - k_D(ell p, e^{i theta} ell p)| over random p."""
    z, w = random_ball_points(samples, np.random.default_rng(seed), max_norm=0.95)
    f = FDiscrete(theta)
    worst = 0.0
    for p in zip(z.tolist(), w.tolist()):
        worst = max(worst, abs(step(f, p, tol=tol, max_n=max_n).limit - model_step(theta, p)))
    return worst


# -- L monotonicity -------------------------------------------------------------

@dataclass
class LReport:
    t: np.ndarray
    L: np.ndarray
    re_hat_inverse: np.ndarray
    non_increasing: bool
    re_non_decreasing: bool


def L_monotonicity_check(h: HFamilyMap, y: complex, t_grid, slack: float = 1e-10) -> LReport:
    """Tabulate L(t) = |1 + X_t| / Re X_t with X_t the hat-inverse of y + t."""
    if not h.in_image(complex(y)):
        raise DomainViolation(f"{y!r} is outside h(D)")
    t = np.asarray(t_grid, dtype=float)
    big_x = np.array([h.hat_inverse(complex(y) + tt) for tt in t])
    L = np.abs(1 + big_x) / big_x.real
    return LReport(
        t, L, big_x.real,
        bool(np.all(np.diff(L) <= slack)),
        bool(np.all(np.diff(big_x.real) >= -slack)),
    )
