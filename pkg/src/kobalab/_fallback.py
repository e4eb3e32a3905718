"""Pure numpy implementations of the hot kernels.

Mirrors ``_speedups.pyx`` function for function; ``kernels`` picks one at
import time.
"""

import cmath
import math

import numpy as np

SWITCH = 0.25  # above this squared pseudo-distance use the log form


def _gap(norm):
    return (1.0 - norm) * (1.0 + norm)


def _atanh_sqrt(num, den, comp):
    u2 = np.clip(num / den, 0.0, None)
    u = np.sqrt(u2)
    with np.errstate(divide="ignore", invalid="ignore"):
        near = np.arctanh(np.minimum(u, 0.5))
        far = np.log1p(u) - 0.5 * np.log(comp)
    return np.where(u2 < SWITCH, near, far)


def ball_dist_many(p1, p2, q1, q2):
    p1, p2, q1, q2 = (np.asarray(a, dtype=complex) for a in (p1, p2, q1, q2))
    num = (np.abs(p1 - q1) ** 2 + np.abs(p2 - q2) ** 2
           - np.abs(p1 * q2 - p2 * q1) ** 2)
    one_minus = 1.0 - (p1 * np.conj(q1) + p2 * np.conj(q2))
    den = np.abs(one_minus) ** 2
    ap = _gap(np.hypot(np.abs(p1), np.abs(p2)))
    aq = _gap(np.hypot(np.abs(q1), np.abs(q2)))
    return _atanh_sqrt(num, den, ap * aq / den)


def omega_dist_many(z1, y1, z2, y2):
    """Ball distance between psi-preimages, computed in (zeta, y) coordinates.

    y must already be in the right half-plane (apply the hat-inverse of h
    first for the sector family). Far out in y both psi-images crowd the
    boundary point (1, 0), so the numerator uses |phi_p(q)|^2 split along p
    and its orthogonal complement, with p the point farther from the origin.
    """
    z1, y1, z2, y2 = np.broadcast_arrays(*(np.asarray(a, dtype=complex) for a in (z1, y1, z2, y2)))
    a1, a2 = 1.0 + y1, 1.0 + y2
    m1 = y1.real - np.abs(z1) ** 2 * np.abs(a1)
    m2 = y2.real - np.abs(z2) ** 2 * np.abs(a2)
    g1, g2 = 4.0 * m1 / np.abs(a1) ** 2, 4.0 * m2 / np.abs(a2) ** 2   # 1 - |p|^2, 1 - |q|^2
    swap = g2 < g1
    z1, z2 = np.where(swap, z2, z1), np.where(swap, z1, z2)
    y1, y2 = np.where(swap, y2, y1), np.where(swap, y1, y2)
    a1, a2 = np.where(swap, a2, a1), np.where(swap, a1, a2)
    g1 = np.minimum(g1, g2)
    s1, s2 = np.sqrt(a1), np.sqrt(a2)
    n = y1 + np.conj(y2) - 2.0 * z1 * np.conj(z2) * s1 * np.conj(s2)
    abs_n2 = np.abs(n) ** 2
    comp = 4.0 * m1 * m2 / abs_n2
    p1, p2 = (y1 - 1.0) / a1, 2.0 * z1 / s1
    v1, v2 = 2.0 * (y2 - y1) / (a1 * a2), 2.0 * (z2 * s1 - z1 * s2) / (s1 * s2)
    vp = g1 - 2.0 * np.conj(n) / (a2 * np.conj(a1))
    with np.errstate(invalid="ignore", divide="ignore"):
        num = (np.abs(vp) ** 2 + g1 * np.abs(p1 * v2 - p2 * v1) ** 2) / (1.0 - g1)
    near_origin = g1 > 0.75
    if np.any(near_origin):
        q1, q2 = (y2 - 1.0) / a2, 2.0 * z2 / s2
        direct = np.abs(v1) ** 2 + np.abs(v2) ** 2 - np.abs(p1 * q2 - p2 * q1) ** 2
        num = np.where(near_origin, direct, num)
    den = 4.0 * abs_n2 / (np.abs(a1) ** 2 * np.abs(a2) ** 2)
    return _atanh_sqrt(num, den, comp)


def omega_contains_many(zeta, y):
    zeta = np.asarray(zeta, dtype=complex)
    y = np.asarray(y, dtype=complex)
    with np.errstate(invalid="ignore", divide="ignore"):
        return (y.real > 0) & (np.abs(zeta) ** 2 < y.real / np.abs(1.0 + y))


def f_orbit(z, w, theta, t, n):
    """Iterate f_t n times from (z, w); returns the n+1 orbit points."""
    zs = np.empty(n + 1, dtype=complex)
    ws = np.empty(n + 1, dtype=complex)
    z = complex(z)
    w = complex(w)
    zs[0] = z
    ws[0] = w
    rot = math.sqrt(2.0) * cmath.exp(1j * t * theta)
    for k in range(1, n + 1):
        den = 2.0 + t - z * t
        z, w = (t + z * (2.0 - t)) / den, rot * w / cmath.sqrt(den)
        zs[k] = z
        ws[k] = w
    return zs, ws


def bidisc_dist_many(z1, y1, z2, y2):
    """Distance in D x H: max of the disc and half-plane distances."""
    z1, y1, z2, y2 = (np.asarray(a, dtype=complex) for a in (z1, y1, z2, y2))
    den = np.abs(1.0 - np.conj(z1) * z2) ** 2
    dd = _atanh_sqrt(np.abs(z1 - z2) ** 2, den,
                     _gap(np.abs(z1)) * _gap(np.abs(z2)) / den)
    den = np.abs(y1 + np.conj(y2)) ** 2
    dh = _atanh_sqrt(np.abs(y1 - y2) ** 2, den, 4.0 * y1.real * y2.real / den)
    return np.maximum(dd, dh)


def consecutive_ball_dist(zs, ws):
    return ball_dist_many(zs[:-1], ws[:-1], zs[1:], ws[1:])


_DIST = {"ball": ball_dist_many, "omega": omega_dist_many, "bidisc": bidisc_dist_many}


def min_dist_to_set(kind, a1, a2, b1, b2):
    """For each point a_i, the minimum ``kind`` distance to the point set b."""
    dist_many = _DIST[kind]
    a1 = np.asarray(a1, dtype=complex)
    a2 = np.asarray(a2, dtype=complex)
    b1 = np.asarray(b1, dtype=complex)
    b2 = np.asarray(b2, dtype=complex)
    d = dist_many(a1[:, None], a2[:, None], b1[None, :], b2[None, :])
    return d.min(axis=1)
