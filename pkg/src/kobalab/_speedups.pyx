# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Same signatures as ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, log1p, atanh, fabs

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double complex cexp(double complex)
    double complex conj(double complex)
    double cabs(double complex)
    double creal(double complex)

cnp.import_array()

cdef double SWITCH = 0.25


cdef inline double abs2(double complex u) nogil:
    return creal(u) * creal(u) + u.imag * u.imag


cdef inline double atanh_sqrt(double num, double den, double comp) nogil:
    cdef double u2 = num / den
    if u2 < 0.0:
        u2 = 0.0
    cdef double u = sqrt(u2)
    if u2 < SWITCH:
        return atanh(u)
    return log1p(u) - 0.5 * log(comp)


cdef inline double gap(double norm) nogil:
    return (1.0 - norm) * (1.0 + norm)


cdef inline double ball_dist(double complex p1, double complex p2,
                             double complex q1, double complex q2) nogil:
    cdef double num = abs2(p1 - q1) + abs2(p2 - q2) - abs2(p1 * q2 - p2 * q1)
    cdef double den = abs2(1.0 - (p1 * conj(q1) + p2 * conj(q2)))
    cdef double ap = gap(sqrt(abs2(p1) + abs2(p2)))
    cdef double aq = gap(sqrt(abs2(q1) + abs2(q2)))
    return atanh_sqrt(num, den, ap * aq / den)


cdef inline double omega_dist(double complex z1, double complex y1,
                              double complex z2, double complex y2) nogil:
    cdef double complex a1 = 1.0 + y1
    cdef double complex a2 = 1.0 + y2
    cdef double m1 = creal(y1) - abs2(z1) * cabs(a1)
    cdef double m2 = creal(y2) - abs2(z2) * cabs(a2)
    cdef double g1 = 4.0 * m1 / abs2(a1)
    cdef double g2 = 4.0 * m2 / abs2(a2)
    if g2 < g1:
        return omega_dist(z2, y2, z1, y1)
    cdef double complex s1 = csqrt(a1)
    cdef double complex s2 = csqrt(a2)
    cdef double complex n = y1 + conj(y2) - 2.0 * z1 * conj(z2) * s1 * conj(s2)
    cdef double abs_n2 = abs2(n)
    cdef double complex p1 = (y1 - 1.0) / a1
    cdef double complex p2 = 2.0 * z1 / s1
    cdef double complex v1 = 2.0 * (y2 - y1) / (a1 * a2)
    cdef double complex v2 = 2.0 * (z2 * s1 - z1 * s2) / (s1 * s2)
    cdef double complex vp
    cdef double num
    if g1 > 0.75:
        num = abs2(v1) + abs2(v2) - abs2(p1 * (2.0 * z2 / s2) - p2 * ((y2 - 1.0) / a2))
    else:
        vp = g1 - 2.0 * conj(n) / (a2 * conj(a1))
        num = (abs2(vp) + g1 * abs2(p1 * v2 - p2 * v1)) / (1.0 - g1)
    return atanh_sqrt(num, 4.0 * abs_n2 / (abs2(a1) * abs2(a2)), 4.0 * m1 * m2 / abs_n2)


cdef inline double bidisc_dist(double complex z1, double complex y1,
                               double complex z2, double complex y2) nogil:
    cdef double den = abs2(1.0 - conj(z1) * z2)
    cdef double dd = atanh_sqrt(abs2(z1 - z2), den,
                                gap(cabs(z1)) * gap(cabs(z2)) / den)
    den = abs2(y1 + conj(y2))
    cdef double dh = atanh_sqrt(abs2(y1 - y2), den, 4.0 * creal(y1) * creal(y2) / den)
    return dd if dd > dh else dh


ctypedef double (*dist_fn)(double complex, double complex,
                           double complex, double complex) nogil


cdef dist_fn _pick(str kind) except NULL:
    if kind == "ball":
        return ball_dist
    if kind == "omega":
        return omega_dist
    if kind == "bidisc":
        return bidisc_dist
    raise KeyError(kind)


def _pairwise(str kind, a1, a2, b1, b2):
    cdef dist_fn fn = _pick(kind)
    a1, a2, b1, b2 = np.broadcast_arrays(*(np.asarray(x, dtype=complex) for x in (a1, a2, b1, b2)))
    shape = a1.shape
    cdef double complex[::1] x1 = np.ascontiguousarray(a1).ravel()
    cdef double complex[::1] x2 = np.ascontiguousarray(a2).ravel()
    cdef double complex[::1] x3 = np.ascontiguousarray(b1).ravel()
    cdef double complex[::1] x4 = np.ascontiguousarray(b2).ravel()
    cdef Py_ssize_t i, n = x1.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = fn(x1[i], x2[i], x3[i], x4[i])
    return out.reshape(shape)


def ball_dist_many(p1, p2, q1, q2):
    return _pairwise("ball", p1, p2, q1, q2)


def omega_dist_many(z1, y1, z2, y2):
    return _pairwise("omega", z1, y1, z2, y2)


def bidisc_dist_many(z1, y1, z2, y2):
    return _pairwise("bidisc", z1, y1, z2, y2)


def omega_contains_many(zeta, y):
    y = np.asarray(y, dtype=complex)
    if np.ndim(zeta) == 0:
        return _omega_contains_scalar(abs(complex(zeta)) ** 2, y)
    zeta, y = np.broadcast_arrays(np.asarray(zeta, dtype=complex), y)
    shape = zeta.shape
    cdef double complex[::1] zz = np.ascontiguousarray(zeta).ravel()
    cdef double complex[::1] yy = np.ascontiguousarray(y).ravel()
    cdef Py_ssize_t i, n = zz.shape[0]
    out = np.empty(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = creal(yy[i]) > 0 and abs2(zz[i]) < creal(yy[i]) / cabs(1.0 + yy[i])
    return out.view(bool).reshape(shape)


def _omega_contains_scalar(double zeta2, y):
    shape = y.shape
    cdef double complex[::1] yy = np.ascontiguousarray(y).ravel()
    cdef Py_ssize_t i, n = yy.shape[0]
    out = np.empty(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = creal(yy[i]) > 0 and zeta2 < creal(yy[i]) / cabs(1.0 + yy[i])
    return out.view(bool).reshape(shape)


def f_orbit(double complex z, double complex w, double theta, double t, Py_ssize_t n):
    zs_arr = np.empty(n + 1, dtype=complex)
    ws_arr = np.empty(n + 1, dtype=complex)
    cdef double complex[::1] zs = zs_arr
    cdef double complex[::1] ws = ws_arr
    cdef double complex rot = sqrt(2.0) * cexp(1j * t * theta)
    cdef double complex den
    cdef Py_ssize_t k
    zs[0] = z
    ws[0] = w
    with nogil:
        for k in range(1, n + 1):
            den = 2.0 + t - z * t
            w = rot * w / csqrt(den)
            z = (t + z * (2.0 - t)) / den
            zs[k] = z
            ws[k] = w
    return zs_arr, ws_arr


def consecutive_ball_dist(zs, ws):
    zs = np.asarray(zs, dtype=complex)
    ws = np.asarray(ws, dtype=complex)
    return _pairwise("ball", zs[:-1], ws[:-1], zs[1:], ws[1:])


def min_dist_to_set(str kind, a1, a2, b1, b2):
    cdef dist_fn fn = _pick(kind)
    cdef double complex[::1] x1 = np.ascontiguousarray(a1, dtype=complex).ravel()
    cdef double complex[::1] x2 = np.ascontiguousarray(a2, dtype=complex).ravel()
    cdef double complex[::1] y1 = np.ascontiguousarray(b1, dtype=complex).ravel()
    cdef double complex[::1] y2 = np.ascontiguousarray(b2, dtype=complex).ravel()
    cdef Py_ssize_t i, j, na = x1.shape[0], nb = y1.shape[0]
    cdef double best, d
    out = np.empty(na)
    cdef double[::1] o = out
    with nogil:
        for i in range(na):
            best = 1e308
            for j in range(nb):
                d = fn(x1[i], x2[i], y1[j], y2[j])
                if d < best:
                    best = d
            o[i] = best
    return out
