"""Sampled conservativeness audit of SCI bounds over random instances."""

import argparse
import json

import numpy as np

from conservafuse.admissible import child_seed
from conservafuse.audit import conservativeness_audit
from conservafuse.instances import random_split_pair


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--instances", type=int, default=5)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--grid", type=int, default=21)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--deflate", type=float, default=1.0)
    args = ap.parse_args()
    rows = []
    for n in args.dims:
        for i in range(args.instances):
            s = child_seed(args.seed, 1000 * n + i)
            a, b = random_split_pair(np.random.default_rng(s), n)
            rep = conservativeness_audit(a, b, args.grid, args.samples, s, args.deflate)
            rows.append({"n": n, "instance": i, "status": rep["status"], "violations": rep["violations"],
                         "worst_relative_slack": rep["worst_relative_slack"]})
            print(json.dumps(rows[-1]))
    failed = sum(r["status"] != "PASS" for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} instances PASS")


if __name__ == "__main__":
    main()
