"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from kobalab import _fallback
from kobalab.dynamics import random_ball_points

try:
    from kobalab import _speedups
except ImportError:
    _speedups = None


def inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    p = random_ball_points(n, rng, 0.999)
    q = random_ball_points(n, rng, 0.999)
    y1, y2 = (1 + p[1]) / (1 - p[1]), (1 + q[1]) / (1 - q[1])
    return p, q, (p[0], y1, q[0], y2)


def cases(n):
    p, q, omega = inputs(n)
    small = inputs(600, 1)
    return {
        "ball_dist_many": (p[0], p[1], q[0], q[1]),
        "omega_dist_many": omega,
        "bidisc_dist_many": omega,
        "omega_contains_many": (omega[0], omega[1]),
        "f_orbit": (0.1 + 0.2j, 0.3 - 0.4j, 1.0, 1.0, n),
        "min_dist_to_set": ("ball", small[0][0], small[0][1], small[1][0], small[1][1]),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _speedups is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'kernel':22s} {'fallback ms':>12s} {'compiled ms':>12s} {'speedup':>8s}")
    for name, call_args in cases(args.n).items():
        t_py = min(timeit.repeat(lambda: getattr(_fallback, name)(*call_args), number=1, repeat=args.repeat))
        if _speedups is None:
            print(f"{name:22s} {1e3 * t_py:12.2f}")
            continue
        t_cy = min(timeit.repeat(lambda: getattr(_speedups, name)(*call_args), number=1, repeat=args.repeat))
        print(f"{name:22s} {1e3 * t_py:12.2f} {1e3 * t_cy:12.2f} {t_py / t_cy:8.1f}")


if __name__ == "__main__":
    main()
