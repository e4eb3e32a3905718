"""Sampled invariant suites shared by the CLI and the acceptance tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .conformal import CAYLEY, HFamilyMap
from .domains import omega_h_contains_many
from .dynamics import (conjugacy_defect, f_semigroup_many, fh_semigroup_many, phi_many,
                       random_ball_points, schwarz_pick_excess, semigroup_defect,
                       semimodel_defect)


@dataclass
class SuiteResult:
    name: str
    worst: float
    threshold: float

    @property
    def ok(self) -> bool:
        return bool(self.worst <= self.threshold)


def random_omega_points(n: int, rng: np.random.Generator, h: HFamilyMap = CAYLEY):
    """Images under phi_h of uniform ball samples, keeping those the membership test accepts."""
    z, w = random_ball_points(n, rng)
    zeta, y = phi_many(h, z, w)
    keep = omega_h_contains_many(h, zeta, y)
    return zeta[keep], y[keep]


def forward_invariance_violations(samples: int = 10**5, seed: int = 0,
                                  h: HFamilyMap = CAYLEY) -> int:
    """Count points of Omega_h pushed out by (zeta, y) -> (e^{i theta} zeta, y + t)."""
    rng = np.random.default_rng(seed)
    zeta, y = random_omega_points(samples, rng, h)
    theta = rng.uniform(0.0, 2 * math.pi, zeta.size)
    t = rng.exponential(1.0, zeta.size)
    inside = omega_h_contains_many(h, np.exp(1j * theta) * zeta, y + t)
    return int(zeta.size - np.count_nonzero(inside))


def metric_axiom_defect(kind: str = "ball", samples: int = 10**4, seed: int = 0) -> float:
    """Worst violation among symmetry, k(p, p) = 0, positivity and the triangle inequality."""
    fn = {"ball": kernels.ball_dist_many, "omega": kernels.omega_dist_many,
          "bidisc": kernels.bidisc_dist_many}[kind]
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(3):
        z, w = random_ball_points(samples, rng, max_norm=0.999)
        if kind == "omega":
            z, w = phi_many(CAYLEY, z, w)
        elif kind == "bidisc":
            w = (1 + w) / (1 - w)
        pts.append((z, w))
    (p1, p2), (q1, q2), (s1, s2) = pts
    pq, qs, ps = fn(p1, p2, q1, q2), fn(q1, q2, s1, s2), fn(p1, p2, s1, s2)
    scale = 1.0 + np.maximum(pq, np.maximum(qs, ps))
    worst = np.max(np.abs(pq - fn(q1, q2, p1, p2)) / scale)
    worst = max(worst, np.max(np.abs(fn(p1, p2, p1, p2))))
    worst = max(worst, np.max(-pq))
    worst = max(worst, np.max((ps - pq - qs) / scale))
    return float(worst)


def verify_suites(theta: float = 1.0, samples: int = 10**4, seed: int = 0, tol: float = 1e-10,
                  beta: float = 1.0, theta_error: float = 0.0) -> list[SuiteResult]:
    """Every sampled invariant check, each with its pass threshold."""
    h = HFamilyMap(beta)
    fam = None if beta == 1.0 else h
    t, s = 0.7, 1.3
    if fam is None:
        def fmap(z, w):
            return f_semigroup_many(theta, t, z, w)
    else:
        def fmap(z, w):
            return fh_semigroup_many(h, theta, t, z, w)
    return [
        SuiteResult("conjugacy", conjugacy_defect(theta, samples, h=h, seed=seed), tol),
        SuiteResult("semigroup", semigroup_defect(theta, t, s, samples, h=fam, seed=seed), tol),
        SuiteResult("semimodel", semimodel_defect(theta, t, samples, h=fam, seed=seed,
                                                  theta_error=theta_error), tol),
        # distances near the sphere carry ~1e-12 absolute rounding
        SuiteResult("schwarz_pick", schwarz_pick_excess(fmap, samples, seed), 1e-9),
        SuiteResult("forward_invariance", float(forward_invariance_violations(10 * samples, seed, h)), 0.0),
        SuiteResult("metric_axioms_ball", metric_axiom_defect("ball", samples, seed), 1e-9),
        SuiteResult("metric_axioms_omega", metric_axiom_defect("omega", samples, seed), 1e-9),
        SuiteResult("metric_axioms_bidisc", metric_axiom_defect("bidisc", samples, seed), 1e-9),
    ]
