"""Write CSV polylines for the worked 2-D example and print a short summary."""

import argparse
from pathlib import Path

import numpy as np

from conservafuse.figures import write_figure_data
from conservafuse.instances import REF_B_F, reference_estimates
from conservafuse.io import read_polylines
from conservafuse.precision import SciPrecisionCurve
from conservafuse.volume import is_tight


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures_out")
    args = ap.parse_args()
    a, b = reference_estimates()
    for path in write_figure_data(a, b, args.out):
        curves = read_polylines(path)
        print(f"{path}: {len(curves)} curves")
    worst = read_polylines(Path(args.out) / "worstcase_ellipses.csv")
    radius = np.sqrt(REF_B_F[0, 0])
    print("largest radius among rank-one fused covariances:", max(np.linalg.norm(p, axis=1).max() for _, p in worst.values()), "<=", radius)
    curve = SciPrecisionCurve(a, b)
    for w in (0.0, 0.3, 0.5, 0.7, 1.0):
        r = is_tight(curve, w)
        print(f"omega={w:.1f} tight={r.tight} gap={r.gap:.3e}")


if __name__ == "__main__":
    main()
