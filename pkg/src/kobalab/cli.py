"""Command-line experiment runner.

Every subcommand produces a table of rows plus a status. Output is a pure
function of the arguments: no clocks, no environment lookups, all sampling
driven by ``--seed``. Exit codes: 0 success, 1 invariant failure, 2 bad config.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import platform
import sys
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import __version__, kernels
from .conformal import HFamilyMap
from .domains import (delta_sector, minimal_M, omega_h_contains_many, r_prime,
                      radial_convergence_check, sigma_bruteforce, sigma_closed_form,
                      sigma_sector_family)
from .dynamics import (FDiscrete, L_monotonicity_check, f_semigroup_many, fh_semigroup_many,
                       model_step, random_ball_points, semigroup_defect, semimodel_defect, step)
from .errors import ConfigurationError, ConstructionRefused, DomainViolation, ToleranceNotMet
from .geodesics import (build_gamma, build_triangle, comparison_constant, four_point_delta,
                        height_budget, max_condition_check, slimness_estimate,
                        triangle_sample_points, verify_quasi_geodesic)
from .metrics import BIDISC, OMEGA
from .suites import forward_invariance_violations, verify_suites

SIG_DIGITS = 17
DEFAULT_BETAS = (1.0, 0.75, 0.5, 0.25)
SELF_TEST_KEYS = {"theta-error", "height-overshoot", "sigma-scale"}


@dataclass
class Report:
    command: str
    rows: list[dict] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


# -- argument parsing -----------------------------------------------------------

def parse_grid(spec: str, name: str) -> np.ndarray:
    """'start:stop:count' -> linspace, or a comma-separated list of values."""
    try:
        if ":" in spec:
            start, stop, count = spec.split(":")
            n = int(count)
            if n < 1:
                raise ValueError
            return np.linspace(float(start), float(stop), n)
        return np.array([float(x) for x in spec.split(",")])
    except ValueError:
        raise ConfigurationError(f"--{name} expects start:stop:count or a comma list, got {spec!r}")


def parse_self_test(items: list[str] | None) -> dict[str, float]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or key not in SELF_TEST_KEYS:
            raise ConfigurationError(f"unknown --self-test entry {item!r}")
        out[key] = float(value)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theta", type=float, default=None, help="rotation angle in radians")
    common.add_argument("--beta", type=float, default=None, help="sector exponent in (0, 1]")
    common.add_argument("--r-grid", default=None, help="start:stop:count or comma list")
    common.add_argument("--t-grid", default=None, help="start:stop:count or comma list")
    common.add_argument("--tol", type=float, default=None, help="pass threshold or solver tolerance")
    common.add_argument("--samples", type=int, default=None, help="sample count")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--wall-time", action="store_true",
                        help="record wall time in JSON metadata (breaks byte-determinism)")
    common.add_argument("--self-test", action="append", metavar="KEY=VALUE", help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="kobalab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run every sampled invariant suite")
    sub.add_parser("sigma", parents=[common], help="extremal ratio sigma(r): closed form vs brute force")
    sub.add_parser("step", parents=[common], help="hyperbolic step of f against the rotation model")
    p = sub.add_parser("slimness", parents=[common], help="non-slim triangle family")
    p.add_argument("--k-max", type=int, default=6, help="use r_k = 1 - 10^-k for k = 1..k-max")
    p = sub.add_parser("qgeo", parents=[common], help="certify the (2,0)-quasi-geodesic construction")
    p.add_argument("--r", type=float, default=0.9)
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--M", type=float, default=None, help="default: minimal_M(r, R)")
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--height", type=float, default=1.0,
                   help="fraction of the admissible height b - a to use (0 gives b = a)")
    sub.add_parser("family", parents=[common], help="sector family h_beta report")
    return parser


# -- subcommands ----------------------------------------------------------------

def run_verify(args, faults) -> Report:
    theta = 1.0 if args.theta is None else args.theta
    beta = 1.0 if args.beta is None else args.beta
    tol = 1e-10 if args.tol is None else args.tol
    samples = 10**4 if args.samples is None else args.samples
    rep = Report("verify")
    for res in verify_suites(theta, samples, args.seed, tol, beta, faults.get("theta-error", 0.0)):
        rep.rows.append({"suite": res.name, "worst": res.worst, "threshold": res.threshold, "pass": res.ok})
        if not res.ok:
            rep.failures.append(f"{res.name}: worst {res.worst:.3e} > {res.threshold:.3e}")
    return rep


def run_sigma(args, faults) -> Report:
    r_grid = np.sort(parse_grid(args.r_grid or "0.5,0.7,0.9", "r-grid"))
    tol = 1e-2 if args.tol is None else args.tol
    grid = 1000 if args.samples is None else args.samples
    beta = 1.0 if args.beta is None else args.beta
    h = HFamilyMap(beta)
    scale = faults.get("sigma-scale", 1.0)
    rep = Report("sigma")
    for r in r_grid:
        closed = sigma_closed_form(r) if beta == 1.0 else sigma_sector_family(h, r)
        if beta == 1.0:
            cert = sigma_bruteforce(r, grid)
        else:
            cert = sigma_bruteforce(r, grid, lambda z, y: omega_h_contains_many(h, z, y))
        brute = None if cert is None else cert.ratio * scale
        rel = None if brute is None else abs(brute - closed) / closed
        rep.rows.append({"r": float(r), "beta": beta, "sigma_closed": closed, "sigma_brute": brute,
                         "M": None if cert is None else cert.M, "R": None if cert is None else cert.R,
                         "rel_error": rel})
        if rel is None or rel >= tol:
            rep.failures.append(f"sigma at r={r!r}: relative error {rel} not below {tol}")
    return rep


def run_step(args, faults) -> Report:
    theta = math.pi if args.theta is None else args.theta
    tol = 1e-9 if args.tol is None else args.tol
    samples = 6 if args.samples is None else args.samples
    z, w = random_ball_points(samples, np.random.default_rng(args.seed), max_norm=0.95)
    points = [(0.2 + 0j, 0j), (0j, 0.5 + 0j)] + list(zip(z.tolist(), w.tolist()))
    f = FDiscrete(theta)
    rep = Report("step")
    for p in points:
        est = step(f, p, tol=tol)
        model = model_step(theta, p)
        err = abs(est.limit - model)
        rep.rows.append({"z0": p[0], "w0": p[1], "theta": theta, "step_limit": est.limit,
                         "model": model, "abs_error": err, "iterations": est.iterations,
                         "converged": est.converged})
        if err >= 1e-6 or not est.converged:
            rep.failures.append(f"step at {p!r}: error {err:.3e}, converged={est.converged}")
    return rep


def run_slimness(args, faults) -> Report:
    if args.r_grid:
        rs = parse_grid(args.r_grid, "r-grid")
        ks = [None] * len(rs)
    else:
        if args.k_max < 1:
            raise ConfigurationError("--k-max must be at least 1")
        ks = list(range(1, args.k_max + 1))
        rs = [1 - 10.0**-k for k in ks]
    per_side = 1000 if args.samples is None else args.samples
    rep = Report("slimness")
    bounds = []
    ball_worst = 0.0
    for k, r in zip(ks, rs):
        for ambient, name, M in ((BIDISC, "bidisc", 0.0), (OMEGA, "ball_pullback", minimal_M(r, 1.0))):
            tr = build_triangle(r, 1.0, M)
            est = slimness_estimate(tr, ambient, per_side)
            delta = four_point_delta(triangle_sample_points(tr), kind="bidisc" if name == "bidisc" else "omega")
            rep.rows.append({"k": k, "r": float(r), "ambient": name, "M": M, "a": tr.a, "b": tr.b,
                             "lower_bound": tr.lower_bound, "G_estimate": est.G,
                             "grid_error": est.grid_error, "four_point_delta": delta})
            if tr.lower_bound > est.G + est.grid_error:
                rep.failures.append(f"{name} r={r!r}: bound {tr.lower_bound} above estimate + grid error")
            if name == "bidisc":
                bounds.append(tr.lower_bound)
            else:
                ball_worst = max(ball_worst, est.G, delta)
    if any(b1 <= b0 for b0, b1 in zip(bounds, bounds[1:])):
        rep.failures.append("bidisc lower bound is not strictly increasing")
    rep.summary = {"ball_pullback_max": ball_worst,
                   "bidisc_bound_growth": bounds[-1] / bounds[0] if bounds else None}
    return rep


def run_qgeo(args, faults) -> Report:
    r, R, c = args.r, args.R, args.c
    M = minimal_M(r, R) if args.M is None else args.M
    tol = 1e-11 if args.tol is None else args.tol
    grid = 50 if args.samples is None else args.samples
    D = comparison_constant(c).D
    rp = r_prime(r)
    a = M + D * R
    height = args.height * faults.get("height-overshoot", 1.0)
    enforce = height <= 1.0
    rep = Report("qgeo")
    sides = {"gamma_minus": (-rp, 0.0), "gamma_plus": (rp, 0.0), "alpha": (-rp, rp)}
    for name, (t0, t1) in sides.items():
        b = a if name == "alpha" else a + height * height_budget(r, R, c, t0, t1)
        qg = build_gamma(r, R, M, t0, t1, a, b, c, enforce=enforce)
        margin = max_condition_check(qg)
        if margin < 0:
            rep.failures.append(f"{name}: max condition violated (margin {margin:.3e})")
        for amb_name, ambient in (("bidisc", BIDISC), ("omega", OMEGA)):
            v = verify_quasi_geodesic(qg, ambient, grid, tol)
            rep.rows.append({"side": name, "ambient": amb_name, "r": r, "R": R, "M": M, "a": a, "b": b,
                             "max_condition_margin": margin, "lower_slack": v.lower_slack,
                             "upper_slack": v.upper_slack, "pairs": v.pairs, "certified": v.ok and margin >= 0})
            if not v.ok:
                rep.failures.append(f"{name} in {amb_name}: quasi-geodesic inequality fails")
    return rep


def run_family(args, faults) -> Report:
    betas = DEFAULT_BETAS if args.beta is None else (args.beta,)
    t_grid = parse_grid(args.t_grid or "1:100:100", "t-grid")
    if np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
        raise ConfigurationError("--t-grid must be positive and increasing")
    theta = 1.0 if args.theta is None else args.theta
    tol = 1e-12 if args.tol is None else args.tol
    samples = 10**4 if args.samples is None else args.samples
    rep = Report("family")
    for beta in betas:
        h = HFamilyMap(beta)
        radial = radial_convergence_check(h, t_grid)
        direction_dev = max(abs(row["direction"] + 1) for row in radial)
        gaps = [row["gap"] for row in radial]
        slope_dev = max(abs(delta_sector(h, float(t)) / t - math.sin(h.half_angle)) for t in t_grid)
        L = L_monotonicity_check(h, h(0.3 + 0.2j), t_grid)
        fam = None if beta == 1.0 else h
        sg = semigroup_defect(theta, 0.7, 1.3, samples, h=fam, seed=args.seed)
        sm = semimodel_defect(theta, 0.7, samples, h=fam, seed=args.seed,
                              theta_error=faults.get("theta-error", 0.0))
        fi = forward_invariance_violations(samples, args.seed, h)
        reduction = None
        if beta == 1.0:
            z, w = random_ball_points(samples, np.random.default_rng(args.seed))
            a1, a2 = fh_semigroup_many(h, theta, 0.7, z, w)
            b1, b2 = f_semigroup_many(theta, 0.7, z, w)
            reduction = float(np.max(np.hypot(np.abs(a1 - b1), np.abs(a2 - b2))))
        row = {"beta": beta, "direction_deviation": direction_dev,
               "gap_decreasing": bool(np.all(np.diff(gaps) < 0)),
               "delta_slope": math.sin(h.half_angle), "delta_slope_deviation": slope_dev,
               "L_first": float(L.L[0]), "L_last": float(L.L[-1]), "L_non_increasing": L.non_increasing,
               "semigroup_defect": sg, "semimodel_defect": sm, "forward_invariance_violations": fi,
               "cayley_reduction_defect": reduction}
        rep.rows.append(row)
        checks = [("direction", direction_dev == 0.0), ("gap", row["gap_decreasing"]),
                  ("delta slope", slope_dev <= tol), ("L monotonicity", L.non_increasing),
                  ("semigroup", sg <= 1e-10), ("semimodel", sm <= 1e-10), ("forward invariance", fi == 0),
                  ("reduction", reduction is None or reduction <= 1e-10)]
        rep.failures.extend(f"beta={beta}: {name}" for name, good in checks if not good)
    return rep


COMMANDS = {"verify": run_verify, "sigma": run_sigma, "step": run_step,
            "slimness": run_slimness, "qgeo": run_qgeo, "family": run_family}


# -- output ---------------------------------------------------------------------

def _flatten(row: dict) -> dict:
    out = {}
    for key, value in row.items():
        if isinstance(value, complex):
            out[f"{key}_re"], out[f"{key}_im"] = value.real, value.imag
        elif isinstance(value, (np.floating, np.integer, np.bool_)):
            out[key] = value.item()
        else:
            out[key] = value
    return out


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{SIG_DIGITS}g")
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def format_csv(rep: Report) -> str:
    rows = [_flatten(r) for r in rep.rows]
    header = list(dict.fromkeys(k for r in rows for k in r))
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(_csv_cell(r.get(k)) for k in header) + "\n")
    return buf.getvalue()


def metadata(args, rep: Report, wall_time: float | None) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "wall_time")}
    return {
        "command": rep.command,
        "config": config,
        "versions": {"kobalab": __version__, "numpy": np.__version__,
                     "python": platform.python_version(), "backend": kernels.BACKEND},
        "wall_time": wall_time,
        "summary": {k: _json_value(v) for k, v in rep.summary.items()},
    }


def format_json(rep: Report, meta: dict) -> str:
    rows = [{k: _json_value(v) for k, v in _flatten(r).items()} for r in rep.rows]
    doc = {"metadata": meta, "rows": rows, "status": {"ok": rep.ok, "failures": rep.failures}}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("kobalab").joinpath("schema/report.schema.json").read_text())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    started = time.perf_counter()
    try:
        faults = parse_self_test(args.self_test)
        rep = COMMANDS[args.command](args, faults)
    except (ConfigurationError, ConstructionRefused, DomainViolation, ValueError) as exc:
        print(f"kobalab {args.command}: configuration error: {exc}", file=sys.stderr)
        return 2
    except ToleranceNotMet as exc:
        print(f"kobalab {args.command}: {exc}", file=sys.stderr)
        return 1
    wall = time.perf_counter() - started if args.wall_time else None
    text = format_csv(rep) if args.format == "csv" else format_json(rep, metadata(args, rep, wall))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for failure in rep.failures:
        print(f"kobalab {args.command}: FAIL {failure}", file=sys.stderr)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
