"""Relative gap between each SCI bound and the minimal volume, across omega."""

import argparse

import numpy as np

from conservafuse.instances import identity_estimates, reference_estimates
from conservafuse.precision import SciPrecisionCurve
from conservafuse.volume import is_tight


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instance", choices=["reference", "identity"], default="reference")
    ap.add_argument("--points", type=int, default=21)
    ap.add_argument("--budget", type=int, default=360)
    args = ap.parse_args()
    pair = reference_estimates() if args.instance == "reference" else identity_estimates(2)
    curve = SciPrecisionCurve(*pair)
    print("omega,tight,gap,witness_x1,witness_x2")
    for w in np.linspace(0.0, 1.0, args.points):
        r = is_tight(curve, float(w), args.budget)
        print(f"{w:.4f},{r.tight},{r.gap:.6e},{r.witness[0]:.6f},{r.witness[1]:.6f}")


if __name__ == "__main__":
    main()
