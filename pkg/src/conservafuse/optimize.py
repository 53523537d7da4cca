"""Choosing omega: minimize an increasing cost of the SCI bound over [0, 1]."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateSplit, NonFiniteCost, UnknownCost
from .fusion import FusionResult, SplitEstimate, sci_bound

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
TIE_TOL = 1e-12


def _logdet(B: np.ndarray) -> float:
    L = np.linalg.cholesky(B)
    return 2.0 * float(np.sum(np.log(np.diag(L))))


@dataclass(frozen=True)
class CostFunction:
    """Loewner-increasing scalar cost. ``custom`` costs are trusted, not checked."""

    tag: str
    evaluator: Callable[[np.ndarray], float] | None = None

    def __post_init__(self):
        if self.tag not in ("trace", "logdet", "maxEigenvalue", "custom"):
            raise UnknownCost(f"unknown cost {self.tag!r}")
        if self.tag == "custom" and self.evaluator is None:
            raise UnknownCost("custom cost needs an evaluator")

    @property
    def convex_in_omega(self) -> bool:
        return self.tag in ("trace", "logdet")

    def __call__(self, B) -> float:
        B = np.asarray(B, dtype=float)
        if self.tag == "trace":
            return float(np.trace(B))
        if self.tag == "logdet":
            return _logdet(B)
        if self.tag == "maxEigenvalue":
            return float(np.linalg.eigvalsh(B)[-1])
        return float(self.evaluator(B))

    @classmethod
    def parse(cls, name: str) -> "CostFunction":
        aliases = {"trace": "trace", "logdet": "logdet", "det": "logdet", "determinant": "logdet",
                   "maxeig": "maxEigenvalue", "maxEigenvalue": "maxEigenvalue", "max_eigenvalue": "maxEigenvalue"}
        if name not in aliases:
            raise UnknownCost(f"unknown cost {name!r}; expected one of {sorted(set(aliases))}")
        return cls(aliases[name])


TRACE = CostFunction("trace")
LOGDET = CostFunction("logdet")
MAX_EIGENVALUE = CostFunction("maxEigenvalue")


def golden_section(f, a: float, b: float, tol: float = 1e-9, max_iter: int = 200):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


@dataclass(frozen=True, eq=False)
class OmegaOptimum:
    omega_star: float
    cost: CostFunction
    value: float
    result: FusionResult

    @property
    def convexity_exploited(self) -> bool:
        return self.cost.convex_in_omega

    def to_json(self) -> dict:
        return {
            "omega_star": self.omega_star,
            "cost": self.cost.tag,
            "J_value": self.value,
            "bound": self.result.bound.tolist(),
            "K_A": self.result.gains.K_A.tolist(),
            "K_B": self.result.gains.K_B.tolist(),
            "convexityExploited": self.convexity_exploited,
        }


def _objective(estA: SplitEstimate, estB: SplitEstimate, cost: CostFunction):
    def J(w: float) -> float:
        try:
            value = cost(sci_bound(estA, estB, w).bound)
        except DegenerateSplit:
            return math.inf
        if math.isnan(value) or value == -math.inf:
            raise NonFiniteCost(f"cost is {value} at omega={w}")
        return value

    return J


def optimize_omega(estA: SplitEstimate, estB: SplitEstimate, cost: CostFunction = TRACE, tol_omega: float = 1e-9) -> OmegaOptimum:
    """Minimize ``J(B_SCI(w))`` over ``w`` in [0, 1].

    Trace and log-determinant are convex in ``w``: golden-section search on
    the whole interval. Other costs: 101-point grid, then golden-section on
    the bracket around the best grid point. Endpoints are always compared and
    near-ties (``1e-12`` relative) resolve to the smallest omega.
    """
    J = _objective(estA, estB, cost)
    candidates = []
    if cost.convex_in_omega:
        w, v = golden_section(J, 0.0, 1.0, tol_omega)
        candidates.append((w, v))
    else:
        grid = np.linspace(0.0, 1.0, 101)
        vals = np.array([J(w) for w in grid])
        i = int(np.argmin(vals))
        candidates.append((grid[i], vals[i]))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, 100)]
        candidates.append(golden_section(J, lo, hi, tol_omega))
    for w in (0.0, 1.0):
        candidates.append((w, J(w)))
    finite = [(w, v) for w, v in candidates if math.isfinite(v)]
    if not finite:
        raise DegenerateSplit("SCI bound is undefined on every candidate omega")
    best = min(v for _, v in finite)
    ties = [w for w, v in finite if v - best <= TIE_TOL * max(1.0, abs(best))]
    w_star = float(min(ties))
    result = sci_bound(estA, estB, w_star)
    return OmegaOptimum(w_star, cost, cost(result.bound), result)


def cost_curve(estA: SplitEstimate, estB: SplitEstimate, cost: CostFunction, grid_size: int = 101):
    """``[(w, J(B_SCI(w)))]`` on a uniform grid of ``grid_size`` points."""
    if grid_size < 3:
        raise ValueError("grid_size must be at least 3")
    return [(float(w), cost(sci_bound(estA, estB, float(w)).bound)) for w in np.linspace(0.0, 1.0, grid_size)]
