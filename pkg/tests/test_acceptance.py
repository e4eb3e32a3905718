"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Each test prints a single PASS/FAIL line (visible without ``-s``) before
asserting, so ``pytest tests/test_acceptance.py`` doubles as a report.
"""

import math
import time

import numpy as np
import pytest

from kobalab.conformal import CAYLEY, HFamilyMap
from kobalab.domains import (delta_sector, minimal_M, r_prime, radial_convergence_check,
                             sigma_bruteforce, sigma_closed_form)
from kobalab.dynamics import (FDiscrete, L_monotonicity_check, conjugacy_defect, semigroup_defect,
                              semimodel_defect, step)
from kobalab.geodesics import (build_gamma, build_triangle, comparison_constant, four_point_delta,
                               height_budget, max_condition_check, slimness_estimate,
                               triangle_sample_points, verify_quasi_geodesic)
from kobalab.metrics import BIDISC, OMEGA, dist_disc
from kobalab.suites import forward_invariance_violations

# lower bounds 1/2 log(1 + 2/(c pi D) k(r'_k, s0)) for k = 1 and k = 6, evaluated in
# 40-digit arithmetic before any run of the library
BOUND_K1 = 0.09276589505024
BOUND_K6 = 0.9505261412403

BETAS = [1.0, 0.75, 0.5, 0.25]


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, elapsed, limit):
        ok = ok and elapsed < limit
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail} "
                  f"({elapsed:.2f} s, limit {limit:g} s)")
        return ok
    return emit


def test_sigma_reproduction(report):
    worst, slowest, ok = 0.0, 0.0, True
    for r in (0.5, 0.7, 0.9):
        start = time.perf_counter()
        cert = sigma_bruteforce(r, 1000)
        elapsed = time.perf_counter() - start
        rel = abs(cert.ratio - sigma_closed_form(r)) / sigma_closed_form(r)
        worst, slowest = max(worst, rel), max(slowest, elapsed)
        ok = ok and rel < 1e-2 and elapsed < 10
    assert report(1, "sigma brute force vs closed form", ok,
                  f"worst relative error {worst:.2e}, slowest r {slowest:.2f} s", slowest, 10)


def test_step_dichotomy(report):
    start = time.perf_counter()
    f = FDiscrete(math.pi)
    on_slice = step(f, (0.2, 0.0), max_n=10**5)
    off_slice = step(f, (0.0, 0.5), max_n=10**5)
    elapsed = time.perf_counter() - start
    expected = dist_disc(1, 0.5 / math.sqrt(2), -0.5 / math.sqrt(2))
    err = abs(off_slice.limit - expected)
    ok = (on_slice.limit < 1e-8 and err < 1e-6
          and max(on_slice.iterations, off_slice.iterations) <= 10**5)
    assert report(2, "step at theta = pi", ok,
                  f"step(0.2,0) = {on_slice.limit:.2e}, |step(0,0.5) - model| = {err:.2e}", elapsed, 5)


def test_invariant_suites(report):
    start = time.perf_counter()
    theta = 1.0
    defects = {"conjugacy": conjugacy_defect(theta, 10**4),
               "semigroup": semigroup_defect(theta, 0.7, 1.3, 10**4),
               "semimodel": semimodel_defect(theta, 0.7, 10**4)}
    elapsed = time.perf_counter() - start
    ok = max(defects.values()) <= 1e-10
    detail = ", ".join(f"{k} {v:.1e}" for k, v in defects.items())
    assert report(3, "conjugacy/semigroup/semimodel defects", ok, detail, elapsed, 10)


def test_quasi_geodesic(report):
    start = time.perf_counter()
    r, R = 0.9, 1.0
    M = minimal_M(r, R)
    a = M + comparison_constant(2.0).D * R
    rp = r_prime(r)
    worst, ok = math.inf, True
    for t0 in (-rp, rp):
        b = a + height_budget(r, R, 2.0, t0, 0.0)
        qg = build_gamma(r, R, M, t0, 0.0, a, b)
        ok = ok and max_condition_check(qg) >= 0
        for ambient in (BIDISC, OMEGA):
            v = verify_quasi_geodesic(qg, ambient, grid=50)
            ok = ok and v.ok and v.pairs == 50 * 49 // 2
            worst = min(worst, v.lower_slack, v.upper_slack)
    elapsed = time.perf_counter() - start
    ok = ok and worst >= 0
    assert report(4, "(2,0)-quasi-geodesic in bidisc and Omega", ok,
                  f"minimum slack {worst:.3e}", elapsed, 60)


def test_slimness_blowup(report):
    start = time.perf_counter()
    bounds, ok = [], True
    for k in range(1, 7):
        tr = build_triangle(1 - 10.0**-k)
        est = slimness_estimate(tr, BIDISC, 1000)
        ok = ok and tr.lower_bound <= est.G + est.grid_error
        bounds.append(tr.lower_bound)
    elapsed = time.perf_counter() - start
    ok = (ok and bool(np.all(np.diff(bounds) > 0)) and bounds[-1] > 3 * bounds[0]
          and math.isclose(bounds[0], BOUND_K1, rel_tol=1e-10)
          and math.isclose(bounds[-1], BOUND_K6, rel_tol=1e-10))
    assert report(5, "bidisc slimness lower bound blows up", ok,
                  f"bound k=1 {bounds[0]:.4f}, k=6 {bounds[-1]:.4f}, ratio {bounds[-1] / bounds[0]:.2f}",
                  elapsed, 300)


def test_ball_control(report):
    start = time.perf_counter()
    ball_G, ball_delta, bidisc_delta = [], [], []
    for k in range(1, 7):
        r = 1 - 10.0**-k
        tr = build_triangle(r, 1.0, minimal_M(r, 1.0))
        ball_G.append(slimness_estimate(tr, OMEGA, 1000).G)
        ball_delta.append(four_point_delta(triangle_sample_points(tr), kind="omega"))
        bidisc_delta.append(four_point_delta(triangle_sample_points(build_triangle(r)), kind="bidisc"))
    elapsed = time.perf_counter() - start
    ok = (max(ball_G) < 0.1 and max(ball_delta) < 1.0
          and bool(np.all(np.diff(bidisc_delta) > 0)))
    assert report(6, "ball pullback stays slim while bidisc grows", ok,
                  f"ball max G {max(ball_G):.3f}, ball max delta {max(ball_delta):.3f}, "
                  f"bidisc delta {bidisc_delta[0]:.3f} -> {bidisc_delta[-1]:.3f}", elapsed, 300)


def test_sector_family(report):
    start = time.perf_counter()
    t_grid = np.linspace(1, 100, 100)
    worst_slope, ok = 0.0, True
    for beta in BETAS:
        h = HFamilyMap(beta)
        ok = ok and all(row["direction"] == -1 for row in radial_convergence_check(h, t_grid))
        slope = math.sin(beta * math.pi / 2)
        worst_slope = max(worst_slope, max(abs(delta_sector(h, float(t)) / t - slope) for t in t_grid))
        ok = ok and L_monotonicity_check(h, h(0.3 + 0.2j), t_grid).non_increasing
    elapsed = time.perf_counter() - start
    ok = ok and worst_slope <= 1e-12
    assert report(7, "sector family radial limits, slopes and L", ok,
                  f"worst slope deviation {worst_slope:.1e}", elapsed, 10)


def test_forward_invariance(report):
    start = time.perf_counter()
    counts = {"Omega": forward_invariance_violations(10**5, 0, CAYLEY)}
    for beta in BETAS[1:]:
        counts[f"Omega_h beta={beta}"] = forward_invariance_violations(10**5, 0, HFamilyMap(beta))
    elapsed = time.perf_counter() - start
    ok = sum(counts.values()) == 0
    assert report(8, "forward invariance under g_t", ok,
                  ", ".join(f"{k}: {v}" for k, v in counts.items()), elapsed, 5)
