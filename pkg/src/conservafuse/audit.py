"""Empirical conservativeness sweep of SCI bounds over admissible samples."""

from __future__ import annotations

import numpy as np

from .admissible import sample_admissible
from .fusion import SplitEstimate, sci_bound
from .spd import spectral_scale, symmetrize

AUDIT_TOL = 1e-8
FAMILY_NAMES = ("gaussian", "rank_one", "worst_case")


def fused_covariance_stack(K_A, K_B, C_A, C_B, stack) -> np.ndarray:
    """``C_F(K, P_AB)`` for every ``P_AB`` in ``stack`` (vectorized)."""
    cross = K_A[None] @ stack @ K_B.T[None]
    base = K_A @ C_A @ K_A.T + K_B @ C_B @ K_B.T
    return symmetrize(base[None] + cross + np.swapaxes(cross, 1, 2))


def conservativeness_audit(
    estA: SplitEstimate,
    estB: SplitEstimate,
    omega_grid: int = 21,
    samples: int = 10_000,
    seed: int = 0,
    deflate: float = 1.0,
    tol: float = AUDIT_TOL,
    stack=None,
) -> dict:
    """Worst ``lambda_min(B - C_F(K_SCI(w), P_AB))`` over omegas x samples.

    ``deflate`` multiplies every bound before comparison (1.0 audits the
    genuine SCI bounds). PASS iff each slack is at least ``-tol * scale``
    with ``scale = spectral_scale(B)``.
    """
    if stack is None:
        stack, family = sample_admissible(estA, estB, samples, seed)
    else:
        stack = np.asarray(stack, dtype=float)
        family = np.zeros(len(stack), int)
    C_A, C_B = estA.C, estB.C
    worst = None
    violations = 0
    for w in np.linspace(0.0, 1.0, omega_grid):
        res = sci_bound(estA, estB, float(w))
        bound = deflate * res.bound
        scale = spectral_scale(bound)
        C_F = fused_covariance_stack(res.gains.K_A, res.gains.K_B, C_A, C_B, stack)
        slack = np.linalg.eigvalsh(bound[None] - C_F)[:, 0] / scale
        violations += int(np.sum(slack < -tol))
        i = int(np.argmin(slack))
        if worst is None or slack[i] < worst["relative_slack"]:
            worst = {
                "omega": float(w),
                "relative_slack": float(slack[i]),
                "slack": float(slack[i] * scale),
                "sample_index": i,
                "family": FAMILY_NAMES[int(family[i])],
                "P_AB": stack[i].tolist(),
            }
    return {
        "status": "PASS" if violations == 0 else "FAIL",
        "violations": violations,
        "worst_relative_slack": worst["relative_slack"],
        "threshold": -tol,
        "omega_grid": omega_grid,
        "samples": int(len(stack)),
        "seed": seed,
        "deflate": deflate,
        "witness": worst,
    }
