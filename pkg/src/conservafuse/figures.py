"""Polyline data for the standard 2-D illustrations (CSV, no rendering)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .admissible import rank_one_cross_cov
from .errors import DimensionNotTwo
from .fusion import FusionGains, SplitEstimate, ci_bound, fused_covariance, sci_bound
from .instances import figure_directions
from .io import write_polylines
from .precision import SciPrecisionCurve
from .spd import ellipse_boundary
from .volume import v_star_boundary

OMEGAS = tuple(i / 10 for i in range(11))
RHOS = tuple(0.25 * i for i in range(5))
POINTS = 360


def ci_curves(estA: SplitEstimate, estB: SplitEstimate, count: int = POINTS):
    for w in OMEGAS:
        e = ellipse_boundary(ci_bound(estA.C, estB.C, w).bound, count)
        yield f"omega={w:g}", e.theta, e.points


def sci_curves(estA: SplitEstimate, estB: SplitEstimate, count: int = POINTS):
    for w in OMEGAS:
        e = ellipse_boundary(sci_bound(estA, estB, w).bound, count)
        yield f"omega={w:g}", e.theta, e.points


def worst_case_curves(estA: SplitEstimate, estB: SplitEstimate, count: int = POINTS):
    """Fused covariances for ``K = (I/2, I/2)`` and five rank-one cross-covariances."""
    n = estA.dim
    gains = FusionGains(np.eye(n) / 2, np.eye(n) / 2)
    for i, d in enumerate(figure_directions()):
        pab = rank_one_cross_cov(estA.P, estB.P, d)
        e = ellipse_boundary(fused_covariance(gains, estA, estB, pab), count)
        yield f"i={i}", e.theta, e.points


def rho_curves(estA: SplitEstimate, estB: SplitEstimate, count: int = POINTS):
    """V* boundary of the bounded-correlation split of ``C_A``, ``C_B`` for each rho."""
    for rho in RHOS:
        curve = SciPrecisionCurve(SplitEstimate.from_rho(estA.C, rho), SplitEstimate.from_rho(estB.C, rho))
        b = v_star_boundary(curve, count)
        yield f"rho={rho:g}", b.theta, b.points


def write_figure_data(estA: SplitEstimate, estB: SplitEstimate, out_dir, count: int = POINTS) -> list[Path]:
    if estA.dim != 2:
        raise DimensionNotTwo(f"figures need dimension 2, got {estA.dim}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    vstar = v_star_boundary(SciPrecisionCurve(estA, estB), count)
    files = {
        "ci_bounds.csv": ci_curves(estA, estB, count),
        "sci_bounds.csv": sci_curves(estA, estB, count),
        "vstar_boundary.csv": [("vstar", vstar.theta, vstar.points)],
        "worstcase_ellipses.csv": worst_case_curves(estA, estB, count),
        "rho_sweep.csv": rho_curves(estA, estB, count),
    }
    written = []
    for name, curves in files.items():
        write_polylines(out / name, curves)
        written.append(out / name)
    return written
