"""Membership, invariance and inscribed-product computations.

The counterexample domain is

    Omega = {(zeta, y) : Re y > 0, |zeta|^2 < Re y / |1 + y|},

its Cayley picture in the bidisc is Omega~, and Omega_h is the image of the
ball under phi_h for the sector family h_beta. Inclusion certificates are
*sampled*: a product D_r x S is accepted when every sampled point of
{|zeta| = r(1 - 1e-9)} x boundary(S) passes the membership test.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .conformal import CAYLEY, HFamilyMap, cayley
from .metrics import dist_disc

ZETA_SHRINK = 1e-9
DEFAULT_BOUNDARY_SAMPLES = 1000
EDGE_DECADES = 6.0  # top/bottom edges are sampled out to M + 10^6 max(M, 1)
LADDER_LOW, LADDER_DECADES = -3.0, 9.0


# -- membership ---------------------------------------------------------------

def contains_omega(zeta: complex, y: complex) -> bool:
    y = complex(y)
    return y.real > 0 and abs(zeta) ** 2 < y.real / abs(1 + y)


def contains_tilde_omega(zeta: complex, y: complex) -> bool:
    return abs(y) ** 2 + 2 * abs(zeta) ** 2 * abs(1 - y) < 1


def contains_omega_h(h: HFamilyMap, zeta: complex, y: complex) -> bool:
    y = complex(y)
    if not h.in_image(y):
        return False
    # |x|^2 + 2|zeta|^2 |1-x| < 1 for x = h^-1(y), multiplied through by |1+Y|^2 / 4
    return contains_omega(zeta, h.hat_inverse(y))


def omega_contains_many(zeta, y) -> np.ndarray:
    return kernels.omega_contains_many(zeta, y)


def omega_h_contains_many(h: HFamilyMap, zeta, y) -> np.ndarray:
    """Vectorized Omega_h membership through the hat-inverse y -> y**(1/beta)."""
    if h.beta == 1.0:
        return kernels.omega_contains_many(zeta, y)
    y = np.asarray(y, dtype=complex)
    inside = (y != 0) & (np.abs(np.angle(y)) < h.half_angle)
    big_y = np.where(inside, y, 1.0) ** (1.0 / h.beta)
    return inside & kernels.omega_contains_many(zeta, big_y)


@dataclass(frozen=True)
class CounterexampleOmega:
    def contains(self, p) -> bool:
        return contains_omega(p[0], p[1])

    def contains_many(self, zeta, y):
        return omega_contains_many(zeta, y)


@dataclass(frozen=True)
class TildeOmega:
    def contains(self, p) -> bool:
        return contains_tilde_omega(p[0], p[1])


@dataclass(frozen=True)
class OmegaH:
    h: HFamilyMap = CAYLEY

    def contains(self, p) -> bool:
        return contains_omega_h(self.h, p[0], p[1])

    def contains_many(self, zeta, y):
        return omega_h_contains_many(self.h, zeta, y)


@dataclass(frozen=True)
class SectorSet:
    """V_{C,M} = {Re w > M, |Im w| < C Re w}."""

    C: float
    M: float = 0.0

    def __post_init__(self):
        if not self.C > 0 or self.M < 0:
            raise ValueError("need C > 0 and M >= 0")

    def contains(self, w: complex) -> bool:
        w = complex(w)
        return w.real > self.M and abs(w.imag) < self.C * w.real

    def contains_tilde(self, u: complex) -> bool:
        """Membership of u in the Cayley image (u = (w-1)/(w+1))."""
        if not abs(u) < 1:
            return False
        return self.contains(cayley(u))


# -- inscribed products -------------------------------------------------------

def r_prime(r: float) -> float:
    """Radius r' below which the D_r density is at most twice the D density."""
    if not 0.5 <= r <= 1.0:
        raise ValueError(f"r_prime needs 1/2 <= r <= 1, got {r!r}")
    return math.sqrt((2 * r * r - r) / (2 - r))


def inscribed_ratio(M: float, R: float) -> float:
    """Q(M) = M / sqrt((1+M)^2 + R^2): the infimum of Re y/|1+y| over S_{R,M}."""
    return M / math.hypot(1 + M, R)


def minimal_M(r: float, R: float, atol: float = 1e-12) -> float:
    """Least M >= 0 with Q(M) >= r^2, by bisection.

    Then D_r x S_{R,M} lies in Omega.
    """
    if not 0 < r < 1 or not R > 0:
        raise ValueError("need 0 < r < 1 and R > 0")
    target = r * r
    if inscribed_ratio(0.0, R) >= target:
        return 0.0
    hi = 1.0
    while inscribed_ratio(hi, R) < target:
        hi *= 2
    lo = 0.0
    while hi - lo > atol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if inscribed_ratio(mid, R) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def _edge_parameters(M: float, n: int) -> np.ndarray:
    span = 10.0**EDGE_DECADES * max(M, 1.0)
    return M + np.concatenate(([0.0], np.geomspace(1e-9 * max(M, 1.0), span, n - 1)))


def rectangle_boundary(R: float, M: float, n: int = DEFAULT_BOUNDARY_SAMPLES) -> np.ndarray:
    """Sample the boundary of S_{R,M}: the left edge and both horizontal edges."""
    left = M + 1j * np.linspace(-R, R, n)
    t = _edge_parameters(M, n)
    return np.concatenate((left, t + 1j * R, t - 1j * R))


def sector_boundary(C: float, M: float, n: int = DEFAULT_BOUNDARY_SAMPLES) -> np.ndarray:
    """Sample the boundary of V_{C,M}: the segment Re w = M and both rays."""
    left = M + 1j * C * M * np.linspace(-1.0, 1.0, n)
    t = _edge_parameters(M, n)
    return np.concatenate((left, t * (1 + 1j * C), t * (1 - 1j * C)))


def _pull_inside(points: np.ndarray, M: float, R: float | None = None, C: float | None = None) -> np.ndarray:
    """Move boundary samples a relative 1e-9 into the open set."""
    re = np.maximum(points.real, M) + 1e-9 * max(M, 1e-3)
    if R is not None:
        im = np.clip(points.imag, -R, R) * (1 - 1e-9)
    else:
        im = np.clip(points.imag, -C * re, C * re) * (1 - 1e-9)
    return re + 1j * im


@dataclass
class InclusionCertificate:
    """Outcome of a sampled inclusion test. ``sampled`` is always True: no proof."""

    ok: bool
    samples: int
    witness: tuple[complex, complex] | None = None
    sampled: bool = field(default=True, init=False)


def _certify(contains_many, r: float, ys: np.ndarray) -> InclusionCertificate:
    zetas = r * (1 - ZETA_SHRINK) * np.exp(1j * np.array([0.0, 1.0, 2.5]))
    for zeta in zetas:
        ok = contains_many(zeta, ys)
        if not ok.all():
            k = int(np.argmin(ok))
            return InclusionCertificate(False, ys.size * len(zetas), (complex(zeta), complex(ys[k])))
    return InclusionCertificate(True, ys.size * len(zetas))


def certify_product(r: float, R: float, M: float, contains_many=omega_contains_many,
                    samples: int = DEFAULT_BOUNDARY_SAMPLES) -> InclusionCertificate:
    """Sampled check of D_r x S_{R,M} inside the domain given by ``contains_many``."""
    ys = _pull_inside(rectangle_boundary(R, M, samples), M, R=R)
    return _certify(contains_many, r, ys)


def product_violation_witness(r: float, R: float, M: float, contains=contains_omega):
    """A point of D_r x S_{R,M} outside the domain near the extremal corner, or None."""
    for eps in (1e-12, 1e-10, 1e-8):
        zeta = complex(r * (1 - eps))
        y = complex(M + eps * max(M, 1.0), R * (1 - eps))
        if not contains(zeta, y):
            return zeta, y
    return None


def certify_sector(r: float, C: float, M: float, contains_many=omega_contains_many,
                   samples: int = DEFAULT_BOUNDARY_SAMPLES) -> InclusionCertificate:
    ys = _pull_inside(sector_boundary(C, M, samples), M, C=C)
    return _certify(contains_many, r, ys)


# -- sigma(r) -------------------------------------------------------------------

def sigma_closed_form(r: float) -> float:
    """sup R/M over D_r x S_{R,M} inside Omega: sqrt((1 - r^4) / r^4)."""
    if not 0 < r < 1:
        raise ValueError("need 0 < r < 1")
    r4 = r**4
    return math.sqrt((1 - r4) / r4)


def sigma_sector_family(h: HFamilyMap, r: float) -> float:
    """sup R/M for Omega_h with h = h_beta: tan(beta * arccos(r^2)).

    The ratio Re Y/|1+Y| is below cos(arg Y) and tends to it as |Y| grows, and
    arg Y = arg(y)/beta for Y = y**(1/beta). At beta = 1 this is sigma_closed_form.
    """
    if not 0 < r < 1:
        raise ValueError("need 0 < r < 1")
    return math.tan(h.beta * math.acos(r * r))


@dataclass(frozen=True)
class SigmaCertificate:
    ratio: float
    M: float
    R: float
    grid: int


def m_ladder(grid: int, j: np.ndarray | int | None = None):
    """Geometric offsets 10^(-3 + 9 j / grid); ladders for grid and k*grid are nested."""
    if j is None:
        j = np.arange(grid + 1)
    return 10.0 ** (LADDER_LOW + LADDER_DECADES * np.asarray(j) / grid)


def sigma_bruteforce(r: float, grid: int = 1000, contains_many=omega_contains_many,
                     boundary_samples: int = DEFAULT_BOUNDARY_SAMPLES,
                     bisection_steps: int = 32) -> SigmaCertificate | None:
    """Search the largest certified R/M over rectangles S_{R,M}.

    For each M on the offset ladder the largest certified R is found by
    bisection; boundary sampling is independent of ``grid``, so refining the
    ladder by an integer factor can only raise the result. Returns None when
    no rectangle is certified.
    """
    if not 0 < r < 1:
        raise ValueError("need 0 < r < 1")
    Ms = m_ladder(grid)
    zeta = r * (1 - ZETA_SHRINK)
    n = boundary_samples
    u = np.linspace(-1.0, 1.0, n)
    s = _edge_parameters(1.0, n) - 1.0  # edge offsets in units of max(M, 1)

    def certified(Rs):
        scale = np.maximum(Ms, 1.0)[:, None]
        left = Ms[:, None] + 1e-9 * np.maximum(Ms, 1e-3)[:, None] + 1j * Rs[:, None] * u[None, :] * (1 - 1e-9)
        t = Ms[:, None] + 1e-9 * np.maximum(Ms, 1e-3)[:, None] + s[None, :] * scale
        top = t + 1j * Rs[:, None] * (1 - 1e-9)
        ys = np.concatenate((left, top, np.conj(top)), axis=1)
        return contains_many(zeta, ys).all(axis=1)

    hi = Ms.copy()
    ok_hi = certified(hi)
    for _ in range(60):
        if not ok_hi.any():
            break
        hi = np.where(ok_hi, 2 * hi, hi)
        ok_hi = certified(hi)
    lo = np.zeros_like(Ms)
    # rows where even R = M fails start their search from [0, M]
    for _ in range(bisection_steps):
        mid = 0.5 * (lo + hi)
        ok = certified(mid)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    ratios = lo / Ms
    k = int(np.argmax(ratios))
    if ratios[k] <= 0:
        return None
    return SigmaCertificate(float(ratios[k]), float(Ms[k]), float(lo[k]), grid)


@dataclass
class SectorFit:
    """Result of fitting D_r x V_{C,M} inside Omega.

    ``M`` is the smallest certified ladder offset; when the sector does not fit
    ``M`` is None and ``witness`` is a point of D_r x V_{C,M} outside Omega.
    """

    fits: bool
    M: float | None = None
    infimum: float | None = None
    witness: tuple[complex, complex] | None = None


def sector_fits(r: float, C: float, grid: int = 1000, witness_t: float = 1e6,
                samples: int = DEFAULT_BOUNDARY_SAMPLES) -> SectorFit:
    if not 0 < r < 1 or not C > 0:
        raise ValueError("need 0 < r < 1 and C > 0")
    slack = 1 / r**4 - 1 - C * C
    if slack <= 0:
        # a point on the ray of slope a < C at height witness_t escapes Omega
        zeta_abs = r * (1 - 1e-12)
        a_min2 = 1 / zeta_abs**4 - 1 - 1 / witness_t**2 - 2 / witness_t
        a = 0.5 * (math.sqrt(max(a_min2, 0.0)) + C)
        y = complex(witness_t, a * witness_t)
        witness = (complex(zeta_abs), y) if not contains_omega(zeta_abs, y) else None
        return SectorFit(False, witness=witness)
    # need 1/t^2 + 2/t <= slack for all t > M
    inf_m = 1.0 / (math.sqrt(1 + slack) - 1)
    j = max(0, math.ceil(grid * (math.log10(inf_m) - LADDER_LOW) / LADDER_DECADES))
    for jj in range(j, j + 50):
        M = float(m_ladder(grid, jj))
        if certify_sector(r, C, M, samples=samples).ok:
            return SectorFit(True, M=M, infimum=inf_m)
    return SectorFit(False, infimum=inf_m)


# -- diagnostics ----------------------------------------------------------------

def suff_cond_diagnostics(domain: str, r_grid, s0: float = 0.0, beta: float = 1.0) -> list[dict]:
    """Tabulate sigma(r), sigma |log(1-r)| and sigma k_{D_r}(s0, r'(r)).

    ``domain`` is "omega", "omega_h" (sector family with ``beta``) or "bidisc".
    For the bidisc every product fits, sigma is +inf and ``unbounded`` is set.
    """
    rows = []
    h = HFamilyMap(beta)
    for r in r_grid:
        r = float(r)
        if not 0.5 < r < 1:
            raise ValueError("r-grid must lie inside (1/2, 1)")
        k = dist_disc(r, s0, r_prime(r))
        if domain == "bidisc":
            sig = math.inf
        elif domain == "omega":
            sig = sigma_closed_form(r)
        elif domain == "omega_h":
            sig = sigma_sector_family(h, r)
        else:
            raise ValueError(f"unknown domain {domain!r}")
        rows.append({
            "r": r,
            "sigma": sig,
            "sigma_log": sig * abs(math.log1p(-r)),
            "sigma_k": sig * k,
            "unbounded": math.isinf(sig),
        })
    return rows


def delta_sector(h: HFamilyMap, t: float) -> float:
    return h.delta(t)


def _dist_to_radius(x: complex) -> float:
    """k_D from x to the half-geodesic [0, 1)."""
    if x.imag == 0.0:
        return 0.0 if x.real >= 0 else dist_disc(1.0, x, 0.0)
    w = cayley(x)
    foot = abs(w)
    if (foot - 1) / (foot + 1) < 0:
        return dist_disc(1.0, x, 0.0)
    return 0.5 * math.atanh(abs(math.sin(cmath.phase(w))))


def radial_convergence_check(h: HFamilyMap, t_grid) -> list[dict]:
    rows = []
    for t in t_grid:
        x = h.inverse(complex(float(t)))
        gap = abs(x - 1)
        rows.append({
            "t": float(t),
            "h_inv": x,
            "gap": gap,
            "direction": (x - 1) / gap,
            "dist_to_radius": _dist_to_radius(x),
        })
    return rows
