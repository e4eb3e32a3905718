import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kobalab.conformal import CAYLEY, HFamilyMap, phi_h, psi_h
from kobalab.domains import (OmegaH, SectorSet, certify_product, certify_sector, contains_omega,
                             contains_omega_h, contains_tilde_omega, delta_sector, inscribed_ratio,
                             minimal_M, omega_contains_many, omega_h_contains_many,
                             product_violation_witness, r_prime, radial_convergence_check,
                             sector_fits, sigma_bruteforce, sigma_closed_form, sigma_sector_family,
                             suff_cond_diagnostics)
from kobalab.dynamics import random_ball_points

BETAS = [1.0, 0.75, 0.5, 0.25]


def quadratic_root(r, R):
    """Positive root of M^2 (1 - r^4) - 2 r^4 M - r^4 (1 + R^2) = 0."""
    r4 = mp.mpf(r) ** 4
    a, b, c = 1 - r4, -2 * r4, -r4 * (1 + mp.mpf(R) ** 2)
    return float((-b + mp.sqrt(b * b - 4 * a * c)) / (2 * a))


def in_ball(p):
    return abs(p[0]) ** 2 + abs(p[1]) ** 2 < 1


class TestMembership:
    @pytest.mark.parametrize("zeta, y, expected", [
        (0, 1, True), (0.8, 1, False), (0.5j, 3 + 1j, True), (1, 5, False), (1, 1e9, False)])
    def test_omega_points(self, zeta, y, expected):
        assert contains_omega(zeta, y) is expected

    @given(st.floats(0.01, 1e6), st.floats(-1e6, 1e6), st.floats(-math.pi, math.pi))
    def test_unit_zeta_never_inside(self, re, im, arg):
        assert not contains_omega(cmath.exp(1j * arg), complex(re, im))

    def test_tilde_omega(self):
        assert contains_tilde_omega(0, 0)
        assert not contains_tilde_omega(0.3, 1)

    def test_tilde_matches_cayley_picture(self):
        rng = np.random.default_rng(0)
        zeta = 2 * (rng.random(10**4) - 0.5) + 2j * (rng.random(10**4) - 0.5)
        y = rng.exponential(2.0, 10**4) + 1j * rng.normal(0, 3, 10**4)
        for z, w in zip(zeta[:2000], y[:2000]):
            assert contains_tilde_omega(z, CAYLEY.inverse(w)) == contains_omega(z, w)

    def test_matches_ball_pullback(self):
        rng = np.random.default_rng(1)
        for _ in range(3000):
            zeta = complex(*rng.normal(0, 0.8, 2))
            y = complex(rng.exponential(2), rng.normal(0, 2))
            assert contains_omega(zeta, y) == in_ball(psi_h(CAYLEY, zeta, y))

    @pytest.mark.parametrize("beta", BETAS)
    def test_omega_h_matches_ball(self, beta):
        h = HFamilyMap(beta)
        rng = np.random.default_rng(2)
        for _ in range(2000):
            zeta = complex(*rng.normal(0, 0.8, 2))
            y = cmath.rect(rng.exponential(3), rng.uniform(-0.99, 0.99) * h.half_angle)
            assert contains_omega_h(h, zeta, y) == in_ball(psi_h(h, zeta, y))

    def test_beta_one_is_omega(self):
        rng = np.random.default_rng(3)
        zeta = rng.normal(0, 0.7, 5000) + 1j * rng.normal(0, 0.7, 5000)
        y = rng.exponential(2, 5000) + 1j * rng.normal(0, 2, 5000)
        np.testing.assert_array_equal(omega_h_contains_many(HFamilyMap(1.0), zeta, y),
                                      omega_contains_many(zeta, y))

    @pytest.mark.parametrize("beta", BETAS)
    @pytest.mark.parametrize("t", [1e-3, 1.0, 1e4])
    def test_real_axis_inside(self, beta, t):
        assert contains_omega_h(HFamilyMap(beta), 0, t)

    def test_vectorized_agrees(self):
        rng = np.random.default_rng(4)
        zeta = rng.normal(0, 0.7, 500) + 1j * rng.normal(0, 0.7, 500)
        y = rng.normal(1, 2, 500) + 1j * rng.normal(0, 2, 500)
        got = omega_contains_many(zeta, y)
        assert list(got) == [contains_omega(z, w) for z, w in zip(zeta, y)]

    @pytest.mark.parametrize("beta", BETAS)
    def test_forward_invariance(self, beta):
        h = HFamilyMap(beta)
        rng = np.random.default_rng(5)
        z, w = random_ball_points(3000, rng)
        for p in zip(z, w):
            zeta, y = phi_h(h, p[0], p[1])
            if not contains_omega_h(h, zeta, y):
                continue
            theta, t = rng.uniform(0, 2 * math.pi), rng.exponential(2)
            assert contains_omega_h(h, cmath.exp(1j * theta) * zeta, y + t)

    def test_decreasing_ratio(self):
        # Re y -> |1+y| / Re y is decreasing for fixed Im y
        for im in (-3.0, 0.0, 0.5, 10.0):
            x = np.geomspace(1e-3, 1e4, 500)
            vals = np.abs(1 + x + 1j * im) / x
            assert np.all(np.diff(vals) < 0)

    def test_sector_starlike(self):
        V = SectorSet(1.5, 2.0)
        rng = np.random.default_rng(6)
        for _ in range(1000):
            w = complex(rng.uniform(0, 20), rng.uniform(-30, 30))
            if V.contains(w):
                assert V.contains(w + rng.exponential(5))
        assert V.contains_tilde(CAYLEY.inverse(5 + 1j)) == V.contains(5 + 1j)


class TestInscribed:
    @pytest.mark.parametrize("r, expected", [(0.5, 0.0), (0.75, math.sqrt(0.3)), (1.0, 1.0)])
    def test_r_prime(self, r, expected):
        assert r_prime(r) == pytest.approx(expected, abs=1e-15)

    def test_r_prime_range(self):
        with pytest.raises(ValueError):
            r_prime(0.4)

    @pytest.mark.parametrize("r, R", [(0.9, 1.0), (0.5, 2.0), (0.99, 0.3), (0.7, 10.0)])
    def test_minimal_m_quadratic(self, r, R):
        assert minimal_M(r, R) == pytest.approx(quadratic_root(r, R), rel=1e-10)

    def test_known_value(self):
        assert minimal_M(0.9, 1.0) == pytest.approx(4.638285193179, rel=1e-10)

    def test_small_r(self):
        assert minimal_M(0.01, 1.0) < 1e-3

    def test_monotone(self):
        rs = np.linspace(0.1, 0.95, 12)
        Ms = [minimal_M(r, 1.0) for r in rs]
        assert np.all(np.diff(Ms) > 0)
        Ms = [minimal_M(0.8, R) for R in (0.1, 0.5, 1, 2, 5)]
        assert np.all(np.diff(Ms) > 0)

    def test_q_of_minimal(self):
        M = minimal_M(0.8, 2.0)
        assert inscribed_ratio(M, 2.0) >= 0.64

    @pytest.mark.parametrize("r, R", [(0.6, 1.0), (0.9, 1.0), (0.95, 3.0)])
    def test_absorption(self, r, R):
        M = minimal_M(r, R)
        cert = certify_product(r, R, M)
        assert cert.ok and cert.sampled
        assert product_violation_witness(r, R, M - 1e-6) is not None
        bad = certify_product(r, R, M - 1e-3)
        assert not bad.ok and not contains_omega(*bad.witness)


class TestSigma:
    @pytest.mark.parametrize("r, expected", [(0.5, math.sqrt(15)), (2 ** -0.25, 1.0)])
    def test_closed_form(self, r, expected):
        assert sigma_closed_form(r) == pytest.approx(expected, rel=1e-14)

    def test_tends_to_zero(self):
        assert sigma_closed_form(1 - 1e-9) < 1e-4

    @pytest.mark.parametrize("r", [0.3, 0.6, 0.9])
    def test_family_reduces(self, r):
        assert sigma_sector_family(HFamilyMap(1.0), r) == pytest.approx(sigma_closed_form(r), rel=1e-13)

    def test_bruteforce_half(self):
        cert = sigma_bruteforce(0.5, 1000)
        assert cert.ratio == pytest.approx(math.sqrt(15), rel=1e-2)
        assert cert.ratio <= math.sqrt(15) * (1 + 1e-9)

    def test_refinement_never_decreases(self):
        coarse = sigma_bruteforce(0.7, 50).ratio
        fine = sigma_bruteforce(0.7, 100).ratio
        assert fine >= coarse

    @pytest.mark.parametrize("beta", [0.5])
    def test_bruteforce_sector_family(self, beta):
        h = HFamilyMap(beta)
        cert = sigma_bruteforce(0.7, 200, lambda z, y: omega_h_contains_many(h, z, y))
        assert cert.ratio == pytest.approx(sigma_sector_family(h, 0.7), rel=1e-2)

    def test_sector_fits_small_slope(self):
        fit = sector_fits(0.5, 1.0)
        assert fit.fits and fit.M >= fit.infimum
        assert certify_sector(0.5, 1.0, fit.M).ok
        rng = np.random.default_rng(7)
        V = SectorSet(1.0, fit.M)
        n = 0
        while n < 10**4:
            zeta = 0.5 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
            w = complex(fit.M + rng.exponential(50), rng.uniform(-1, 1))
            w = complex(w.real, w.imag * w.real)
            if V.contains(w):
                assert contains_omega(zeta, w)
                n += 1

    @pytest.mark.parametrize("C", [4.0, math.sqrt(15)])
    def test_sector_too_steep(self, C):
        fit = sector_fits(0.5, C)
        assert not fit.fits
        zeta, y = fit.witness
        assert abs(zeta) < 0.5 and SectorSet(C, 0).contains(y) and not contains_omega(zeta, y)

    def test_diagnostics(self):
        rows = suff_cond_diagnostics("omega", [0.9, 0.99, 0.999])
        logs = [row["sigma_log"] for row in rows]
        assert logs[0] > logs[1] > logs[2]
        ratios = [row["sigma_log"] / row["sigma_k"] for row in rows]
        assert max(ratios) / min(ratios) < 3
        assert all(row["unbounded"] for row in suff_cond_diagnostics("bidisc", [0.9, 0.99]))


class TestSectorFamily:
    @pytest.mark.parametrize("beta, t, expected", [(1.0, 3.0, 3.0), (0.5, 2.0, math.sqrt(2))])
    def test_delta(self, beta, t, expected):
        assert delta_sector(HFamilyMap(beta), t) == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize("beta", BETAS)
    def test_delta_linear(self, beta):
        h = HFamilyMap(beta)
        assert delta_sector(h, 7.0) == pytest.approx(7 * delta_sector(h, 1.0), rel=1e-15)

    @pytest.mark.parametrize("beta", BETAS)
    def test_radial(self, beta):
        rows = radial_convergence_check(HFamilyMap(beta), np.linspace(1, 100, 100))
        assert all(row["direction"] == -1 for row in rows)
        gaps = [row["gap"] for row in rows]
        assert np.all(np.diff(gaps) < 0)
        assert all(row["dist_to_radius"] == 0 for row in rows if row["h_inv"].real >= 0)

    def test_half_inverse(self):
        h = HFamilyMap(0.5)
        for t in (0.5, 2.0, 9.0):
            assert h.inverse(t) == pytest.approx((t * t - 1) / (t * t + 1), rel=1e-14)

    def test_outside_sector(self):
        assert not OmegaH(HFamilyMap(0.5)).contains((0, -1 + 0.1j))
