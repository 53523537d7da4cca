"""SCI precision curve ``H(w) = w A(w) + (1-w) B(1-w)`` and its derivatives.

``A(w) = (P_A + w Q_A)^-1`` and ``B(w) = (P_B + w Q_B)^-1``. For every fixed
direction ``x`` the scalar ``h(w) = x' H(w) x`` is strictly concave when the
four matrices are strictly positive definite, which makes the argmax over
``[0, 1]`` unique and locatable by bisection on ``x' H'(w) x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateSplit, DimensionMismatch, OmegaOutOfRange, WrongCase, ZeroVector
from .fusion import SplitEstimate
from .spd import DEFAULT_TOL, inv_pd, spectral_scale, symmetrize

CASE_TOL = 1e-12
BISECTION_WIDTH = 1e-12


def _is_zero(M: np.ndarray, ref: np.ndarray) -> bool:
    return float(np.max(np.abs(M))) <= DEFAULT_TOL.psd * spectral_scale(ref)


@dataclass(frozen=True, eq=False)
class SciPrecisionCurve:
    estA: SplitEstimate
    estB: SplitEstimate

    def __post_init__(self):
        if self.estA.dim != self.estB.dim:
            raise DimensionMismatch(f"dimensions {self.estA.dim} and {self.estB.dim} differ")

    @property
    def dim(self) -> int:
        return self.estA.dim

    @property
    def null_split(self) -> bool:
        """True when ``P_A = P_B = 0``: the only admissible cross-covariance is 0."""
        return _is_zero(self.estA.P, self.estA.C) and _is_zero(self.estB.P, self.estB.C)

    @cached_property
    def endpoint_slope_matrices(self):
        """``A(0) P_A A(0)``, ``B(1) P_B B(1)``, ``A(1) P_A A(1)``, ``B(0) P_B B(0)``."""
        A0, B1, A1, B0 = self.A(0.0), self.B(1.0), self.A(1.0), self.B(0.0)
        Pa, Pb = self.estA.P, self.estB.P
        return A0 @ Pa @ A0, B1 @ Pb @ B1, A1 @ Pa @ A1, B0 @ Pb @ B0

    def A(self, w: float) -> np.ndarray:
        e = self.estA
        return inv_pd(e.P + w * e.Q, DegenerateSplit, what=f"P_A + {w} Q_A")

    def B(self, w: float) -> np.ndarray:
        e = self.estB
        return inv_pd(e.P + w * e.Q, DegenerateSplit, what=f"P_B + {w} Q_B")

    def H(self, w: float) -> np.ndarray:
        _check_omega(w)
        return symmetrize(w * self.A(w) + (1.0 - w) * self.B(1.0 - w))

    def dH(self, w: float) -> np.ndarray:
        _check_omega(w)
        A, Bb = self.A(w), self.B(1.0 - w)
        return symmetrize(A @ self.estA.P @ A - Bb @ self.estB.P @ Bb)

    def d2H(self, w: float) -> np.ndarray:
        _check_omega(w)
        a, b = self.estA, self.estB
        A, Bb = self.A(w), self.B(1.0 - w)
        term_a = A @ (a.Q @ A @ a.P + a.P @ A @ a.Q) @ A
        term_b = Bb @ (b.Q @ Bb @ b.P + b.P @ Bb @ b.Q) @ Bb
        return symmetrize(-term_a - term_b)

    def bound(self, w: float) -> np.ndarray:
        """``B_SCI(w) = H(w)^-1``."""
        return inv_pd(self.H(w), DegenerateSplit, what="SCI precision")

    def dbound(self, w: float) -> np.ndarray:
        """``B' = -B H' B``."""
        B = self.bound(w)
        return symmetrize(-B @ self.dH(w) @ B)

    def d2bound(self, w: float) -> np.ndarray:
        """``B'' = 2 B H' B H' B - B H'' B``."""
        B, D = self.bound(w), self.dH(w)
        return symmetrize(2.0 * B @ D @ B @ D @ B - B @ self.d2H(w) @ B)

    def h_grid(self, x, omegas) -> np.ndarray:
        """``x' H(w) x`` on an array of omegas (vectorized)."""
        x = np.asarray(x, dtype=float)
        w = np.asarray(omegas, dtype=float)[:, None, None]
        a, b = self.estA, self.estB
        MA = a.P[None] + w * a.Q[None]
        MB = b.P[None] + (1.0 - w) * b.Q[None]
        ya = np.linalg.solve(MA, np.broadcast_to(x, (len(w), x.size))[..., None])[..., 0]
        yb = np.linalg.solve(MB, np.broadcast_to(x, (len(w), x.size))[..., None])[..., 0]
        return w[:, 0, 0] * (ya @ x) + (1.0 - w[:, 0, 0]) * (yb @ x)

    def bound_grid(self, omegas) -> np.ndarray:
        """Stack of ``B_SCI(w)`` for an array of omegas (vectorized)."""
        w = np.asarray(omegas, dtype=float)[:, None, None]
        a, b = self.estA, self.estB
        H = w * np.linalg.inv(a.P[None] + w * a.Q[None]) + (1.0 - w) * np.linalg.inv(
            b.P[None] + (1.0 - w) * b.Q[None]
        )
        return symmetrize(np.linalg.inv(symmetrize(H)))


def _check_omega(w: float):
    if not (0.0 <= w <= 1.0):
        raise OmegaOutOfRange(f"omega={w} outside [0, 1]")


def sci_precision(curve: SciPrecisionCurve, omega: float, order: int = 0) -> np.ndarray:
    """``H(w)``, ``H'(w)`` or ``H''(w)`` for ``order`` 0, 1, 2."""
    if order == 0:
        return curve.H(omega)
    if order == 1:
        return curve.dH(omega)
    if order == 2:
        return curve.d2H(omega)
    raise ValueError(f"order must be 0, 1 or 2, got {order}")


def _direction(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if not np.any(x):
        raise ZeroVector("direction must be nonzero")
    return x


def _endpoint_slopes(curve: SciPrecisionCurve, xs: np.ndarray):
    """Slopes of ``h`` at 0 and 1 for each row of ``xs``, with term magnitudes."""
    S = curve.endpoint_slope_matrices
    q = [np.einsum("ki,ij,kj->k", xs, M, xs) for M in S]
    return (q[0] - q[1], np.abs(q[0]) + np.abs(q[1])), (q[2] - q[3], np.abs(q[2]) + np.abs(q[3]))


def _classify(curve: SciPrecisionCurve, xs: np.ndarray):
    (d0, s0), (d1, s1) = _endpoint_slopes(curve, xs)
    case = np.full(len(xs), 3)
    case[d1 > CASE_TOL * s1] = 2
    case[d0 < -CASE_TOL * s0] = 1
    return case, (d0, s0), (d1, s1)


def classify_direction(curve: SciPrecisionCurve, x) -> int:
    """Which of the three exclusive cases holds for direction ``x``.

    1: ``x' H'(0) x < 0`` (max of h at w = 0), 2: ``x' H'(1) x > 0`` (max at
    w = 1), 3: stationary point in [0, 1]. Slopes within ``1e-12`` (relative)
    of zero count as case 3.
    """
    return int(_classify(curve, _direction(x)[None])[0][0])


def argmax_omega_batch(curve: SciPrecisionCurve, xs):
    """Vectorized :func:`argmax_omega` over the rows of ``xs``.

    Case-3 roots of the decreasing ``w -> x' H'(w) x`` are bracketed by a
    simultaneous bisection down to width ``1e-12``.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if not np.all(np.any(xs, axis=1)):
        raise ZeroVector("direction must be nonzero")
    case, (d0, s0), (d1, s1) = _classify(curve, xs)
    omega = np.where(case == 2, 1.0, 0.0)
    interior = (case == 3) & (d0 > CASE_TOL * s0) & (d1 < -CASE_TOL * s1)
    omega[(case == 3) & ~interior & (d0 > CASE_TOL * s0)] = 1.0
    idx = np.flatnonzero(interior)
    if idx.size:
        a, b = curve.estA, curve.estB
        x = xs[idx]
        lo, hi = np.zeros(idx.size), np.ones(idx.size)
        while np.max(hi - lo) > BISECTION_WIDTH:
            mid = 0.5 * (lo + hi)
            # x' H'(w) x = u' P_A u - v' P_B v with u = A(w) x, v = B(1-w) x
            u = np.linalg.solve(a.P[None] + mid[:, None, None] * a.Q[None], x[..., None])[..., 0]
            v = np.linalg.solve(b.P[None] + (1.0 - mid)[:, None, None] * b.Q[None], x[..., None])[..., 0]
            slope = np.einsum("ki,ij,kj->k", u, a.P, u) - np.einsum("ki,ij,kj->k", v, b.P, v)
            stalled = (mid <= lo) | (mid >= hi)
            lo = np.where(slope > 0.0, mid, lo)
            hi = np.where(slope < 0.0, mid, hi)
            exact = (slope == 0.0) | stalled
            lo, hi = np.where(exact, mid, lo), np.where(exact, mid, hi)
        omega[idx] = 0.5 * (lo + hi)
    return case, omega


def solve_omega0(curve: SciPrecisionCurve, x) -> float:
    """Root of the decreasing map ``w -> x' H'(w) x`` for a case-3 direction."""
    case, omega = argmax_omega_batch(curve, _direction(x)[None])
    if case[0] != 3:
        raise WrongCase("direction is not in case 3")
    return float(omega[0])


def argmax_omega(curve: SciPrecisionCurve, x):
    """``(case, omega0)`` where ``omega0`` maximizes ``x' H(w) x`` on [0, 1]."""
    case, omega = argmax_omega_batch(curve, _direction(x)[None])
    return int(case[0]), float(omega[0])
