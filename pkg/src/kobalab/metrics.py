"""Kobayashi metrics and distances on the model domains.

Normalization: the disc has density |v|/(1-|z|^2), so k_D(0, t) = artanh(t)
and the right half-plane has k_H(a, b) = 1/2 |log(b/a)| on the real axis.
Every other domain is reached from these by an explicit conformal map, so
all metrics and distances here are exact closed forms.

Points of planar domains are Python complex numbers; points of two-variable
domains are pairs ``(z, w)`` of complex numbers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from . import kernels
from .conformal import CAYLEY, HFamilyMap, dpsi_h, psi_h
from .errors import DomainViolation, ToleranceNotMet

BOUNDARY_GAP = 1e-14
_SWITCH = 0.25
MAX_SUBINTERVALS = 2**20


def _stable_atanh_sqrt(num: float, den: float, comp: float) -> float:
    """artanh(sqrt(num/den)) where comp = 1 - num/den is supplied separately.

    ``num`` is accurate for nearby points and ``comp`` for far-apart ones, so
    both regimes keep full relative precision.
    """
    u2 = max(num / den, 0.0)
    u = math.sqrt(u2)
    if u2 < _SWITCH:
        return math.atanh(u)
    return math.log1p(u) - 0.5 * math.log(comp)


def _gap(norm: float) -> float:
    """1 - norm^2, exact when norm itself is."""
    return (1 - norm) * (1 + norm)


def _check_disc(r: float, z: complex) -> None:
    if not r - abs(z) > BOUNDARY_GAP * r:
        raise DomainViolation(f"|z| = {abs(z)!r} is not inside the disc of radius {r!r}")


def _check_radius(r: float) -> None:
    if not 0.0 < r <= 1.0:
        raise ValueError(f"disc radius must lie in (0, 1], got {r!r}")


def metric_disc(r: float, z: complex, v: complex) -> float:
    _check_radius(r)
    _check_disc(r, z)
    return r * abs(v) / (r * r - abs(z) ** 2)


def dist_disc(r: float, a: complex, b: complex) -> float:
    _check_radius(r)
    _check_disc(r, a)
    _check_disc(r, b)
    a, b = a / r, b / r
    den = abs(1 - a.conjugate() * b) ** 2
    comp = _gap(abs(a)) * _gap(abs(b)) / den
    return _stable_atanh_sqrt(abs(a - b) ** 2, den, comp)


def _check_halfplane(a: complex) -> None:
    if not a.real > 0.0:
        raise DomainViolation(f"Re = {a.real!r} is not positive")


def metric_halfplane(z: complex, v: complex) -> float:
    _check_halfplane(z)
    return abs(v) / (2 * z.real)


def dist_halfplane(a: complex, b: complex) -> float:
    a, b = complex(a), complex(b)
    _check_halfplane(a)
    _check_halfplane(b)
    den = abs(a + b.conjugate()) ** 2
    return _stable_atanh_sqrt(abs(a - b) ** 2, den, 4 * a.real * b.real / den)


def _check_strip(R: float, z: complex) -> None:
    if not R > 0:
        raise ValueError(f"strip half-width must be positive, got {R!r}")
    if not abs(z.imag) < R:
        raise DomainViolation(f"|Im z| = {abs(z.imag)!r} >= {R!r}")


def metric_strip(R: float, z: complex, v: complex) -> float:
    z = complex(z)
    _check_strip(R, z)
    return math.pi / (4 * R) * abs(v) / math.cos(math.pi * z.imag / (2 * R))


def dist_strip(R: float, a: complex, b: complex) -> float:
    a, b = complex(a), complex(b)
    _check_strip(R, a)
    _check_strip(R, b)
    # exp(pi w / 2R) maps the strip onto H; shift by Re a to avoid overflow
    shift = a.real
    return dist_halfplane(cmath.exp(math.pi * (a - shift) / (2 * R)),
                          cmath.exp(math.pi * (b - shift) / (2 * R)))


def _check_halfstrip(R: float, M: float, z: complex) -> None:
    if M < 0:
        raise ValueError(f"half-strip offset must be >= 0, got {M!r}")
    _check_strip(R, z)
    if not z.real > M:
        raise DomainViolation(f"Re z = {z.real!r} <= M = {M!r}")


def metric_halfstrip(R: float, M: float, z: complex, v: complex) -> float:
    """Pull-back of the half-plane metric through w -> sinh(pi (w - M) / 2R)."""
    z = complex(z)
    _check_halfstrip(R, M, z)
    u = math.pi * (z - M) / (2 * R)
    # |cosh u| / Re sinh u = sqrt(1 + (cos y / sinh x)^2) / cos y
    x, y = u.real, u.imag
    cos_y = math.cos(y)
    ratio = math.sqrt(1.0 + (cos_y / math.sinh(min(x, 700.0))) ** 2) / cos_y
    return math.pi / (4 * R) * abs(v) * ratio


def dist_halfstrip(R: float, M: float, a: complex, b: complex) -> float:
    a, b = complex(a), complex(b)
    _check_halfstrip(R, M, a)
    _check_halfstrip(R, M, b)
    fa = cmath.sinh(math.pi * (a - M) / (2 * R))
    fb = cmath.sinh(math.pi * (b - M) / (2 * R))
    return dist_halfplane(fa, fb)


def _inner(p, q) -> complex:
    return p[0] * q[0].conjugate() + p[1] * q[1].conjugate()


def _check_ball(p) -> None:
    if not 1.0 - math.hypot(abs(p[0]), abs(p[1])) > BOUNDARY_GAP:
        raise DomainViolation(f"{p!r} is not inside the unit ball")


def metric_ball(p, v) -> float:
    _check_ball(p)
    a = 1.0 - abs(p[0]) ** 2 - abs(p[1]) ** 2
    nv = abs(v[0]) ** 2 + abs(v[1]) ** 2
    return math.sqrt(nv / a + abs(_inner(v, p)) ** 2 / (a * a))


def dist_ball(p, q) -> float:
    """Kobayashi distance of the unit ball in C^2.

    Equal to artanh sqrt(1 - (1-|p|^2)(1-|q|^2)/|1-<p,q>|^2); the numerator
    is evaluated as |p-q|^2 - |p1 q2 - p2 q1|^2 so that nearby points keep
    their relative accuracy.
    """
    p = (complex(p[0]), complex(p[1]))
    q = (complex(q[0]), complex(q[1]))
    _check_ball(p)
    _check_ball(q)
    num = (abs(p[0] - q[0]) ** 2 + abs(p[1] - q[1]) ** 2
           - abs(p[0] * q[1] - p[1] * q[0]) ** 2)
    den = abs(1 - _inner(p, q)) ** 2
    comp = _gap(math.hypot(abs(p[0]), abs(p[1]))) * _gap(math.hypot(abs(q[0]), abs(q[1]))) / den
    return _stable_atanh_sqrt(num, den, comp)


def dist_product(dL: float, dR: float) -> float:
    if dL < 0 or dR < 0:
        raise ValueError(f"distances must be non-negative, got {dL!r}, {dR!r}")
    return max(dL, dR)


def omega_h_margin(h: HFamilyMap, zeta: complex, y: complex) -> float:
    """1 - |h^-1(y)|^2 - 2|zeta|^2 |1 - h^-1(y)|; positive exactly on Omega_h."""
    if not h.in_image(y):
        return -math.inf
    big_y = h.hat_inverse(y)
    return 4.0 * (big_y.real - abs(zeta) ** 2 * abs(1 + big_y)) / abs(1 + big_y) ** 2


def _check_pullback(h: HFamilyMap, p) -> None:
    if not omega_h_margin(h, p[0], p[1]) > 0:
        raise DomainViolation(f"{p!r} is not in Omega_h (beta={h.beta})")


def dist_pullback(h: HFamilyMap, p, q) -> float:
    """Kobayashi distance of Omega_h, i.e. the ball distance of the psi_h images.

    Evaluated in (zeta, hat-inverse(y)) coordinates, which stays accurate far
    out in the y direction where the psi_h images crowd the boundary point (1, 0).
    """
    p = (complex(p[0]), complex(p[1]))
    q = (complex(q[0]), complex(q[1]))
    _check_pullback(h, p)
    _check_pullback(h, q)
    return float(kernels.omega_dist_many(p[0], h.hat_inverse(p[1]), q[0], h.hat_inverse(q[1])))


def metric_pullback(h: HFamilyMap, p, v) -> float:
    _check_pullback(h, p)
    return metric_ball(psi_h(h, p[0], p[1]), dpsi_h(h, p[0], p[1], v[0], v[1]))


# -- domain descriptors ------------------------------------------------------

@dataclass(frozen=True)
class Disc:
    r: float = 1.0

    def __post_init__(self):
        _check_radius(self.r)

    def contains(self, z) -> bool:
        return abs(z) < self.r

    def metric(self, z, v) -> float:
        return metric_disc(self.r, z, v)

    def distance(self, a, b) -> float:
        return dist_disc(self.r, a, b)


@dataclass(frozen=True)
class HalfPlane:
    def contains(self, z) -> bool:
        return complex(z).real > 0

    def metric(self, z, v) -> float:
        return metric_halfplane(complex(z), v)

    def distance(self, a, b) -> float:
        return dist_halfplane(a, b)


@dataclass(frozen=True)
class Strip:
    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("R must be positive")

    def contains(self, z) -> bool:
        return abs(complex(z).imag) < self.R

    def metric(self, z, v) -> float:
        return metric_strip(self.R, z, v)

    def distance(self, a, b) -> float:
        return dist_strip(self.R, a, b)


@dataclass(frozen=True)
class HalfStrip:
    R: float
    M: float = 0.0

    def __post_init__(self):
        if not self.R > 0 or self.M < 0:
            raise ValueError("need R > 0 and M >= 0")

    def contains(self, z) -> bool:
        z = complex(z)
        return abs(z.imag) < self.R and z.real > self.M

    def metric(self, z, v) -> float:
        return metric_halfstrip(self.R, self.M, z, v)

    def distance(self, a, b) -> float:
        return dist_halfstrip(self.R, self.M, a, b)


@dataclass(frozen=True)
class Product:
    """Product of two planar domains; metric and distance are the max of the factors."""

    left: object
    right: object

    def contains(self, p) -> bool:
        return self.left.contains(p[0]) and self.right.contains(p[1])

    def metric(self, p, v) -> float:
        return dist_product(self.left.metric(p[0], v[0]), self.right.metric(p[1], v[1]))

    def distance(self, p, q) -> float:
        return dist_product(self.left.distance(p[0], q[0]), self.right.distance(p[1], q[1]))


@dataclass(frozen=True)
class Ball2:
    def contains(self, p) -> bool:
        return abs(p[0]) ** 2 + abs(p[1]) ** 2 < 1

    def metric(self, p, v) -> float:
        return metric_ball(p, v)

    def distance(self, p, q) -> float:
        return dist_ball(p, q)


@dataclass(frozen=True)
class Pullback:
    """Omega_h = phi_h(B^2) with the distance transported from the ball."""

    h: HFamilyMap = CAYLEY

    def contains(self, p) -> bool:
        return omega_h_margin(self.h, p[0], p[1]) > 0

    def metric(self, p, v) -> float:
        return metric_pullback(self.h, p, v)

    def distance(self, p, q) -> float:
        return dist_pullback(self.h, p, q)


BIDISC = Product(Disc(1.0), HalfPlane())
OMEGA = Pullback(CAYLEY)

DomainDescriptor = Disc | HalfPlane | Strip | HalfStrip | Product | Ball2 | Pullback


# -- curves and hyperbolic length --------------------------------------------

@dataclass(frozen=True)
class Curve:
    """Parametrized curve on [a, b] with an analytic derivative."""

    a: float
    b: float
    point: Callable
    tangent: Callable

    def check_derivative(self, samples: int = 9, rtol: float = 1e-6) -> float:
        """Largest relative mismatch between ``tangent`` and centred differences."""
        worst = 0.0
        h = 1e-6 * (self.b - self.a)
        for k in range(1, samples + 1):
            t = self.a + (self.b - self.a) * k / (samples + 1)
            p_plus, p_minus = self.point(t + h), self.point(t - h)
            v = self.tangent(t)
            if isinstance(v, tuple):
                fd = [(x - y) / (2 * h) for x, y in zip(p_plus, p_minus)]
                err = math.sqrt(sum(abs(f - g) ** 2 for f, g in zip(fd, v)))
                scale = math.sqrt(sum(abs(g) ** 2 for g in v))
            else:
                err = abs((p_plus - p_minus) / (2 * h) - v)
                scale = abs(v)
            worst = max(worst, err / max(scale, 1e-300))
        if worst > rtol:
            raise ValueError(f"tangent disagrees with finite differences (rel. err {worst:.3g})")
        return worst


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float,
                     max_subintervals: int = MAX_SUBINTERVALS) -> float:
    """Adaptive Simpson quadrature with bisection and an absolute error target."""
    if a == b:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol)]
    total = 0.0
    err_total = 0.0
    pieces = 1
    while stack:
        a0, b0, fa0, fm0, fb0, whole0, tol0 = stack.pop()
        m0 = 0.5 * (a0 + b0)
        lm, rm = 0.5 * (a0 + m0), 0.5 * (m0 + b0)
        flm, frm = f(lm), f(rm)
        left = (m0 - a0) / 6 * (fa0 + 4 * flm + fm0)
        right = (b0 - m0) / 6 * (fm0 + 4 * frm + fb0)
        diff = left + right - whole0
        if abs(diff) <= 15 * tol0 or m0 in (a0, b0):
            total += left + right + diff / 15
            err_total += abs(diff) / 15
            continue
        pieces += 1
        if pieces > max_subintervals:
            best = total + left + right + sum(s[5] for s in stack)
            raise ToleranceNotMet(
                f"adaptive Simpson exceeded {max_subintervals} subintervals", best, err_total + abs(diff))
        stack.append((a0, m0, fa0, flm, fm0, left, tol0 / 2))
        stack.append((m0, b0, fm0, frm, fb0, right, tol0 / 2))
    return total


def hyperbolic_length(curve: Curve, domain, interval: tuple[float, float] | None = None,
                      tol: float = 1e-10) -> float:
    """Integral of the domain's Kobayashi metric along ``curve``.

    Raises DomainViolation if the curve leaves the domain at a quadrature node.
    """
    s, t = interval if interval is not None else (curve.a, curve.b)
    if s > t:
        s, t = t, s
    return adaptive_simpson(lambda u: domain.metric(curve.point(u), curve.tangent(u)), s, t, tol)
