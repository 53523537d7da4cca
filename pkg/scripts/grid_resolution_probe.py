"""How far a uniform omega grid falls below the exact max of x' H_SCI(w) x.

Uses the same 200 seeded (instance, direction) pairs as the acceptance
suite and reports the worst relative shortfall for several grid sizes next
to the concavity bound max|h''| d^2 / 8.
"""

import argparse

import numpy as np

from conservafuse.admissible import child_seed
from conservafuse.instances import random_split_pair
from conservafuse.precision import SciPrecisionCurve
from conservafuse.volume import g_value

ROOT_SEED = 20_240_601


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[101, 1001, 10_001, 100_001])
    ap.add_argument("--pairs", type=int, default=200)
    args = ap.parse_args()
    cases = []
    for i in range(args.pairs):
        rng = np.random.default_rng(child_seed(ROOT_SEED, i))
        n = (2, 3, 4)[i % 3]
        curve = SciPrecisionCurve(*random_split_pair(rng, n))
        x = rng.standard_normal(n)
        curv = max(abs(x @ curve.d2H(w) @ x) for w in np.linspace(0, 1, 201))
        cases.append((curve, x, g_value(curve, x), curv))
    print("grid_points,worst_rel_shortfall,pairs_over_1e-8,worst_rel_bound")
    for m in args.sizes:
        grid = np.linspace(0, 1, m)
        rel = np.array([(v - c.h_grid(x, grid).max()) / v for c, x, v, _ in cases])
        bound = max(k * grid[1] ** 2 / 8 / v for _, _, v, k in cases)
        print(f"{m},{rel.max():.3e},{int((rel > 1e-8).sum())},{bound:.3e}")


if __name__ == "__main__":
    main()
