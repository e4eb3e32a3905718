"""Hot-kernel dispatch: compiled extension when built, numpy fallback otherwise."""

from . import _fallback

try:
    from . import _speedups as _impl
    BACKEND = "cython"
except ImportError:  # extension not built
    _impl = _fallback
    BACKEND = "python"

ball_dist_many = _impl.ball_dist_many
omega_dist_many = _impl.omega_dist_many
bidisc_dist_many = _impl.bidisc_dist_many
omega_contains_many = _impl.omega_contains_many
f_orbit = _impl.f_orbit
consecutive_ball_dist = _impl.consecutive_ball_dist
min_dist_to_set = _impl.min_dist_to_set

__all__ = [
    "BACKEND",
    "ball_dist_many",
    "omega_dist_many",
    "bidisc_dist_many",
    "omega_contains_many",
    "f_orbit",
    "consecutive_ball_dist",
    "min_dist_to_set",
]
