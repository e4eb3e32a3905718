"""Closed-form conformal maps shared by the metric and domain modules.

All roots and powers are principal. Every caller first checks that the
argument has positive real part, so the branch cut on the negative real
axis is never approached.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainViolation

SQRT2 = math.sqrt(2.0)


def principal_sqrt(u: complex, what: str = "argument") -> complex:
    if not u.real > 0.0:
        raise DomainViolation(f"branch cut contact: Re({what}) = {u.real!r} <= 0")
    return cmath.sqrt(u)


def cayley(z: complex) -> complex:
    """Disc to right half-plane, z -> (1+z)/(1-z)."""
    return (1 + z) / (1 - z)


def inverse_cayley(y: complex) -> complex:
    """Right half-plane to disc, y -> (y-1)/(y+1)."""
    return (y - 1) / (y + 1)


@dataclass(frozen=True)
class HFamilyMap:
    """Riemann map h(z) = ((1+z)/(1-z))**beta of the disc onto a sector.

    The image is the open sector |arg y| < beta*pi/2, symmetric about the real
    axis and starlike at infinity. ``beta = 1`` is the Cayley transform.
    """

    beta: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta!r}")

    @property
    def half_angle(self) -> float:
        return self.beta * math.pi / 2

    def in_image(self, y: complex) -> bool:
        if y == 0:
            return False
        return abs(cmath.phase(y)) < self.half_angle

    def __call__(self, z: complex) -> complex:
        if not abs(z) < 1:
            raise DomainViolation(f"h is defined on the unit disc, got {z!r}")
        c = cayley(z)
        return c if self.beta == 1.0 else c**self.beta

    def hat_inverse(self, y: complex) -> complex:
        """Inverse of h composed with the Cayley transform: sector -> H."""
        if not self.in_image(y):
            raise DomainViolation(f"{y!r} is outside the sector of half-angle {self.half_angle}")
        return y if self.beta == 1.0 else y ** (1.0 / self.beta)

    def inverse(self, y: complex) -> complex:
        return inverse_cayley(self.hat_inverse(y))

    def inverse_derivative(self, y: complex) -> complex:
        big_y = self.hat_inverse(y)
        return 2.0 / (big_y + 1) ** 2 * (big_y / (self.beta * y))

    def delta(self, t: float) -> float:
        """Euclidean distance from the real point t > 0 to the sector boundary."""
        if not t > 0:
            raise ValueError("t must be positive")
        if self.beta == 1.0:
            return float(t)
        return t * math.sin(self.half_angle)


CAYLEY = HFamilyMap(1.0)


def phi_h(h: HFamilyMap, z: complex, w: complex) -> tuple[complex, complex]:
    """Embedding of the ball, (z, w) -> (w / (sqrt2 sqrt(1-z)), h(z))."""
    s = principal_sqrt(1 - z, "1-z")
    return w / (SQRT2 * s), h(z)


def psi_h(h: HFamilyMap, zeta: complex, y: complex) -> tuple[complex, complex]:
    """Inverse of ``phi_h``: (zeta, y) -> (h^-1(y), sqrt2 zeta sqrt(1 - h^-1(y)))."""
    x = h.inverse(y)
    return x, SQRT2 * zeta * principal_sqrt(1 - x, "1-h^-1(y)")


def dpsi_h(h: HFamilyMap, zeta: complex, y: complex, dzeta: complex, dy: complex) -> tuple[complex, complex]:
    """Differential of ``psi_h`` applied to the tangent (dzeta, dy)."""
    x = h.inverse(y)
    s = principal_sqrt(1 - x, "1-h^-1(y)")
    dx = h.inverse_derivative(y) * dy
    return dx, SQRT2 * (s * dzeta - zeta * dx / (2 * s))
