"""Minimal volume shared by all conservative bounds, and SCI tightness.

``g(x) = min over admissible P_AB of x' C_F*(P_AB)^-1 x`` where ``C_F*`` is
the Bar-Shalom-Campo covariance. The production evaluator uses the
three-case characterization (endpoint or stationary point of the concave
map ``w -> x' H_SCI(w) x``) together with an explicit minimizing ``P_AB``.
``V* = {x : g(x) <= 1}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .admissible import CrossCovariance, sample_admissible, worst_case_cross_cov
from .errors import DimensionNotTwo, OmegaOutOfRange, ZeroVector
from .precision import (
    SciPrecisionCurve,
    argmax_omega,
    classify_direction,
    sci_precision,
    solve_omega0,
)
from .spd import Ellipse2D, symmetrize

__all__ = [
    "DirectionAnalysis",
    "SciPrecisionCurve",
    "TightnessResult",
    "bsc_precision_along",
    "classify_direction",
    "g",
    "g_min_oracle",
    "g_value",
    "is_tight",
    "sci_precision",
    "solve_omega0",
    "v_star_boundary",
    "v_star_membership",
]

MEMBERSHIP_TOL = 1e-12
TIGHT_GAP = 1e-7


@dataclass(frozen=True, eq=False)
class DirectionAnalysis:
    x: np.ndarray
    case: int
    omega0: float
    g: float
    worst_case: CrossCovariance | None = None

    def to_json(self) -> dict:
        return {"x": self.x.tolist(), "case": self.case, "omega0": self.omega0, "g": self.g}


def _direction(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if not np.any(x):
        raise ZeroVector("direction must be nonzero")
    return x


def _if_precision(curve: SciPrecisionCurve) -> np.ndarray:
    return np.linalg.inv(curve.estA.C) + np.linalg.inv(curve.estB.C)


def g_value(curve: SciPrecisionCurve, x) -> float:
    """Scalar ``g(x)`` without building the minimizing cross-covariance."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if not np.any(x):
        return 0.0
    if curve.null_split:
        return float(x @ _if_precision(curve) @ x)
    _, omega0 = argmax_omega(curve, x)
    return float(curve.h_grid(x, [omega0])[0])


def g(curve: SciPrecisionCurve, x, worst_case: bool = True) -> DirectionAnalysis:
    """Evaluate ``g`` at ``x`` and return the maximizing omega and case.

    With ``P_A = P_B = 0`` the admissible set is ``{0}``: ``g`` is the
    information-filter quadratic form and ``H_SCI`` is flat on (0, 1), so
    ``omega0 = 0.5`` is reported with case 3.
    """
    x = _direction(x)
    if curve.null_split:
        n = curve.dim
        return DirectionAnalysis(
            x, 3, 0.5, float(x @ _if_precision(curve) @ x), CrossCovariance(np.zeros((n, n)), np.zeros((n, n)))
        )
    case, omega0 = argmax_omega(curve, x)
    value = float(x @ curve.H(omega0) @ x)
    pab = None
    if worst_case:
        pab = worst_case_cross_cov(x, curve.estA, curve.estB, curve)[0]
    return DirectionAnalysis(x, case, omega0, value, pab)


def bsc_precision_along(curve: SciPrecisionCurve, x, stack) -> np.ndarray:
    """``x' C_F*(P_AB)^-1 x`` for a stack of cross-covariances (vectorized)."""
    x = np.asarray(x, dtype=float).reshape(-1)
    stack = np.asarray(stack, dtype=float)
    if stack.ndim == 2:
        stack = stack[None]
    C_A, C_B = curve.estA.C, curve.estB.C
    PT = np.swapaxes(stack, 1, 2)
    R = C_A[None] + C_B[None] - stack - PT
    C_F = C_A[None] - (C_A[None] - stack) @ np.linalg.solve(R, C_A[None] - PT)
    C_F = symmetrize(C_F)
    y = np.linalg.solve(C_F, np.broadcast_to(x, (len(stack), x.size))[..., None])[..., 0]
    return y @ x


def g_min_oracle(
    curve: SciPrecisionCurve,
    x,
    sample_count: int,
    seed: int,
    include_worst_case: bool = True,
    samples=None,
) -> float:
    """Brute-force ``min x' C_F*(P_AB)^-1 x`` over sampled admissible ``P_AB``.

    ``samples`` replaces the random draw by an explicit stack.
    """
    x = _direction(x)
    if samples is None:
        count = sample_count - 1 if include_worst_case else sample_count
        stack, _ = sample_admissible(curve.estA, curve.estB, max(count, 0), seed, curve=curve)
    else:
        stack = np.asarray(samples, dtype=float).reshape(-1, curve.dim, curve.dim)
    if include_worst_case:
        pab = worst_case_cross_cov(x, curve.estA, curve.estB, curve)[0].matrix
        stack = np.concatenate([stack, pab[None]], axis=0)
    return float(np.min(bsc_precision_along(curve, x, stack)))


def v_star_membership(curve: SciPrecisionCurve, x) -> bool:
    return g_value(curve, x) <= 1.0 + MEMBERSHIP_TOL


def v_star_boundary(curve: SciPrecisionCurve, count: int = 360) -> Ellipse2D:
    """Polar samples ``u(t) / sqrt(g(u(t)))`` of the boundary of V* (2-D only)."""
    if curve.dim != 2:
        raise DimensionNotTwo(f"V* boundary needs dimension 2, got {curve.dim}")
    theta = 2.0 * np.pi * np.arange(count) / count
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    radii = np.array([1.0 / np.sqrt(g_value(curve, u)) for u in dirs])
    return Ellipse2D(theta=theta, points=dirs * radii[:, None])


@dataclass(frozen=True, eq=False)
class TightnessResult:
    """Outcome of the touching-point search for one SCI bound.

    ``gap`` is ``min_x g(x) / x' H_SCI(w) x - 1`` as found by the search;
    ``witness`` is the direction achieving it.
    """

    tight: bool
    omega: float
    gap: float
    witness: np.ndarray

    def __bool__(self) -> bool:
        return self.tight


def _fibonacci_sphere(count: int) -> np.ndarray:
    k = np.arange(count) + 0.5
    z = 1.0 - k / count  # upper hemisphere; x and -x are equivalent
    r = np.sqrt(1.0 - z * z)
    phi = np.pi * (1.0 + 5**0.5) * k
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def is_tight(curve: SciPrecisionCurve, omega: float, search_budget: int = 360, refine: int = 3) -> TightnessResult:
    """Search for ``x`` with ``g(x) = x' H_SCI(omega) x``.

    Bounded-budget heuristic: coarse direction grid (angles for n = 2,
    Fibonacci hemisphere for n = 3, Gaussian directions otherwise) then local
    refinement of the ``refine`` best candidates. Tight when the relative gap
    is at most ``1e-7``.
    """
    if not (0.0 <= omega <= 1.0):
        raise OmegaOutOfRange(f"omega={omega} outside [0, 1]")
    n = curve.dim
    H = curve.H(omega)

    def ratio(x):
        return g_value(curve, x) / float(x @ H @ x)

    if n == 1:
        x = np.ones(1)
        gap = ratio(x) - 1.0
        return TightnessResult(gap <= TIGHT_GAP, omega, gap, x)

    if n == 2:
        thetas = np.pi * np.arange(search_budget) / search_budget
        values = np.array([ratio(np.array([np.cos(t), np.sin(t)])) for t in thetas])
        step = np.pi / search_budget
        best_t, best_v = thetas[np.argmin(values)], values.min()
        for i in np.argsort(values)[:refine]:
            res = minimize_scalar(
                lambda t: ratio(np.array([np.cos(t), np.sin(t)])),
                bounds=(thetas[i] - step, thetas[i] + step),
                method="bounded",
                options={"xatol": 1e-12},
            )
            if res.fun < best_v:
                best_t, best_v = res.x, res.fun
        witness = np.array([np.cos(best_t), np.sin(best_t)])
    else:
        if n == 3:
            dirs = _fibonacci_sphere(search_budget)
        else:
            dirs = np.random.default_rng(0).standard_normal((search_budget, n))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        values = np.array([ratio(d) for d in dirs])
        witness, best_v = dirs[np.argmin(values)], values.min()
        for i in np.argsort(values)[:refine]:
            res = minimize(
                lambda v: ratio(v / np.linalg.norm(v)),
                dirs[i],
                method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000},
            )
            if res.fun < best_v:
                witness, best_v = res.x / np.linalg.norm(res.x), res.fun
    gap = float(best_v - 1.0)
    return TightnessResult(gap <= TIGHT_GAP, float(omega), gap, witness)
