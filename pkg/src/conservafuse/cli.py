"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numeric degeneracy, 4 internal error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import errors
from .audit import conservativeness_audit
from .figures import write_figure_data
from .fusion import bar_shalom_campo, ci_bound, information_fusion, rho_bound, sci_bound
from .io import dumps, load_problem
from .optimize import CostFunction, optimize_omega
from .precision import SciPrecisionCurve
from .volume import g

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_INTERNAL = 0, 2, 3, 4


class CliInputError(errors.ValidationError):
    pass


def _require(value, flag: str, method: str):
    if value is None:
        raise CliInputError(f"method {method!r} needs {flag}")
    return value


def cmd_fuse(args) -> dict:
    prob = load_problem(args.input)
    a, b = prob.estA, prob.estB
    means = (a.mean, b.mean)
    m = args.method
    if m == "bsc":
        if args.pab_index >= len(prob.cross_covariances):
            raise CliInputError("method 'bsc' needs a P_AB entry in the input file")
        return bar_shalom_campo(a, b, prob.cross_covariances[args.pab_index]).to_json()
    if m == "if":
        return information_fusion(a, b).to_json()
    if m == "ci":
        return ci_bound(a.C, b.C, _require(args.omega, "--omega", m), means).to_json()
    if m == "sci":
        return sci_bound(a, b, _require(args.omega, "--omega", m)).to_json()
    rho = args.rho if args.rho is not None else prob.rho
    return rho_bound(a.C, b.C, _require(rho, "--rho", m), _require(args.omega, "--omega", m), means).to_json()


def cmd_audit(args) -> dict:
    prob = load_problem(args.input)
    return conservativeness_audit(prob.estA, prob.estB, args.grid, args.samples, args.seed, args.deflate)


def cmd_figures(args) -> dict:
    prob = load_problem(args.input)
    files = write_figure_data(prob.estA, prob.estB, args.out)
    return {"files": [str(f) for f in files]}


def cmd_optimize(args) -> dict:
    prob = load_problem(args.input)
    cost = CostFunction.parse(args.cost)
    return optimize_omega(prob.estA, prob.estB, cost).to_json()


def cmd_analyze(args) -> dict:
    prob = load_problem(args.input)
    try:
        x = np.array([float(v) for v in args.x.split(",")])
    except ValueError as exc:
        raise CliInputError(f"--x must be comma-separated numbers, got {args.x!r}") from exc
    if x.size != prob.dim:
        raise errors.DimensionMismatch(f"--x has {x.size} entries, problem has dimension {prob.dim}")
    res = g(SciPrecisionCurve(prob.estA, prob.estB), x)
    out = res.to_json()
    out["P_AB"] = res.worst_case.matrix.tolist()
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conservafuse", description="Conservative fusion with split covariances")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fuse", help="apply one fusion rule")
    f.add_argument("--input", required=True)
    f.add_argument("--method", required=True, choices=["bsc", "if", "ci", "sci", "rho"])
    f.add_argument("--omega", type=float)
    f.add_argument("--rho", type=float)
    f.add_argument("--pab-index", type=int, default=0, help="which P_AB entry to use for bsc")
    f.set_defaults(func=cmd_fuse)

    a = sub.add_parser("audit", help="sampled conservativeness sweep of SCI bounds")
    a.add_argument("--input", required=True)
    a.add_argument("--grid", type=int, default=21)
    a.add_argument("--samples", type=int, default=10_000)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--deflate", type=float, default=1.0, help="scale bounds before checking")
    a.set_defaults(func=cmd_audit)

    fig = sub.add_parser("figures", help="write CSV polylines for 2-D illustrations")
    fig.add_argument("--input", required=True)
    fig.add_argument("--out", required=True)
    fig.set_defaults(func=cmd_figures)

    o = sub.add_parser("optimize", help="minimize a cost of the SCI bound over omega")
    o.add_argument("--input", required=True)
    o.add_argument("--cost", default="trace")
    o.set_defaults(func=cmd_optimize)

    d = sub.add_parser("analyze", help="evaluate g and the worst-case cross-covariance along a direction")
    d.add_argument("--input", required=True)
    d.add_argument("--x", required=True, help="comma-separated direction")
    d.set_defaults(func=cmd_analyze)
    return p


def _error_payload(exc: Exception, code: int) -> str:
    return dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except errors.ValidationError as exc:
        print(_error_payload(exc, EXIT_INPUT))
        return EXIT_INPUT
    except errors.DegeneracyError as exc:
        print(_error_payload(exc, EXIT_DEGENERATE))
        return EXIT_DEGENERATE
    except Exception as exc:  # noqa: BLE001
        print(_error_payload(exc, EXIT_INTERNAL))
        return EXIT_INTERNAL
    print(dumps(out))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
