"""Closed-form two-estimator fusion rules.

Every rule returns a :class:`FusionResult` holding the fused mean (when
means are available), the covariance bound and the gains ``(K_A, K_B)``.
Gains always satisfy ``K_A + K_B = I``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDenominator,
    DegenerateSplit,
    DimensionMismatch,
    GainConstraintViolated,
    OmegaOutOfRange,
    ParameterOutOfRange,
    SingularCovariance,
    SingularR,
)
from .spd import DEFAULT_TOL, inv_pd, spectral_scale, symmetrize, validate_spd

GAIN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SplitEstimate:
    """Estimate whose error covariance splits as ``C = P + Q``.

    ``P`` is the component correlated (to an unknown degree) with the other
    estimator, ``Q`` the component uncorrelated with everything.
    """

    P: np.ndarray
    Q: np.ndarray
    mean: np.ndarray | None = None

    def __post_init__(self):
        P = validate_spd(self.P).data
        Q = validate_spd(self.Q).data
        if P.shape != Q.shape:
            raise DimensionMismatch(f"P is {P.shape} but Q is {Q.shape}")
        validate_spd(P + Q, strict=True)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        if self.mean is not None:
            mean = np.array(self.mean, dtype=float).reshape(-1)
            if mean.shape[0] != P.shape[0]:
                raise DimensionMismatch(f"mean has length {mean.shape[0]}, covariance is {P.shape}")
            mean.setflags(write=False)
            object.__setattr__(self, "mean", mean)

    @property
    def C(self) -> np.ndarray:
        return self.P + self.Q

    @property
    def dim(self) -> int:
        return self.P.shape[0]

    @classmethod
    def from_covariance(cls, C, mean=None) -> "SplitEstimate":
        """Estimate with no known uncorrelated component (``Q = 0``)."""
        C = np.asarray(C, dtype=float)
        return cls(P=C, Q=np.zeros_like(C), mean=mean)

    @classmethod
    def from_rho(cls, C, rho: float, mean=None) -> "SplitEstimate":
        """Bounded-correlation split ``P = rho C``, ``Q = (1 - rho) C``."""
        if not 0.0 <= rho <= 1.0:
            raise ParameterOutOfRange(f"rho={rho} outside [0, 1]")
        C = np.asarray(C, dtype=float)
        return cls(P=rho * C, Q=(1.0 - rho) * C, mean=mean)


@dataclass(frozen=True, eq=False)
class FusionGains:
    K_A: np.ndarray
    K_B: np.ndarray

    def __post_init__(self):
        K_A = np.asarray(self.K_A, dtype=float)
        K_B = np.asarray(self.K_B, dtype=float)
        if K_A.shape != K_B.shape or K_A.ndim != 2 or K_A.shape[0] != K_A.shape[1]:
            raise DimensionMismatch(f"gain shapes {K_A.shape} and {K_B.shape}")
        err = np.max(np.abs(K_A + K_B - np.eye(K_A.shape[0])))
        if err > GAIN_TOL * max(1.0, np.max(np.abs(K_A)), np.max(np.abs(K_B))):
            raise GainConstraintViolated(f"|K_A + K_B - I| = {err:.3e}")
        object.__setattr__(self, "K_A", K_A)
        object.__setattr__(self, "K_B", K_B)

    @classmethod
    def from_K_A(cls, K_A) -> "FusionGains":
        K_A = np.asarray(K_A, dtype=float)
        return cls(K_A, np.eye(K_A.shape[0]) - K_A)


@dataclass(frozen=True, eq=False)
class FusionResult:
    """Fused estimate. ``params`` holds omega / rho / gamma when relevant."""

    method: str
    bound: np.ndarray
    gains: FusionGains
    mean: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    @property
    def omega(self) -> float | None:
        return self.params.get("omega")

    def to_json(self) -> dict:
        out = {
            "method": self.method,
            "bound": self.bound.tolist(),
            "K_A": self.gains.K_A.tolist(),
            "K_B": self.gains.K_B.tolist(),
            "mean": None if self.mean is None else self.mean.tolist(),
        }
        out["omega"] = self.params.get("omega")
        for key in ("rho", "gamma"):
            if key in self.params:
                out[key] = self.params[key]
        return out


def _pab_matrix(pab) -> np.ndarray:
    matrix = getattr(pab, "matrix", pab)
    return np.asarray(matrix, dtype=float)


def _check_dims(*mats):
    shapes = {np.shape(m) for m in mats}
    if len(shapes) != 1:
        raise DimensionMismatch(f"inconsistent shapes {sorted(shapes)}")


def _fused_mean(gains: FusionGains, estA: SplitEstimate, estB: SplitEstimate):
    if estA.mean is None or estB.mean is None:
        return None
    return gains.K_A @ estA.mean + gains.K_B @ estB.mean


def _check_omega(omega: float):
    if not (0.0 <= omega <= 1.0):
        raise OmegaOutOfRange(f"omega={omega} outside [0, 1]")


def fused_covariance(gains: FusionGains, estA: SplitEstimate, estB: SplitEstimate, pab) -> np.ndarray:
    """Error covariance of ``K_A x_A + K_B x_B`` for a given cross-covariance."""
    P_AB = _pab_matrix(pab)
    _check_dims(gains.K_A, estA.P, estB.P, P_AB)
    K_A, K_B = gains.K_A, gains.K_B
    cross = K_A @ P_AB @ K_B.T
    C_F = K_A @ estA.C @ K_A.T + cross + cross.T + K_B @ estB.C @ K_B.T
    return symmetrize(C_F)


def _R(estA: SplitEstimate, estB: SplitEstimate, P_AB: np.ndarray) -> np.ndarray:
    R = estA.C + estB.C - P_AB - P_AB.T
    lam = np.linalg.eigvalsh(symmetrize(R))
    if lam[0] <= DEFAULT_TOL.psd * spectral_scale(R):
        raise SingularR(f"R = C_A + C_B - P_AB - P_AB' is singular (smallest eigenvalue {lam[0]:.3e})")
    return R


def bar_shalom_campo(estA: SplitEstimate, estB: SplitEstimate, pab) -> FusionResult:
    """Loewner-optimal fusion for a known cross-covariance."""
    P_AB = _pab_matrix(pab)
    _check_dims(estA.P, estB.P, P_AB)
    R = _R(estA, estB, P_AB)
    K_A = np.linalg.solve(R.T, (estB.C - P_AB.T).T).T
    K_B = np.linalg.solve(R.T, (estA.C - P_AB).T).T
    gains = FusionGains(K_A, K_B)
    bound = fused_covariance(gains, estA, estB, P_AB)
    return FusionResult("bsc", bound, gains, _fused_mean(gains, estA, estB))


def optimal_covariance_forms(estA: SplitEstimate, estB: SplitEstimate, pab):
    """Three algebraically equal expressions of the Bar-Shalom-Campo covariance.

    Returns ``(A_form, B_form, AB_form)``::

        C_A  - (C_A - P_AB) R^-1 (C_A - P_AB')
        C_B  - (C_B - P_AB') R^-1 (C_B - P_AB)
        P_AB + (C_A - P_AB) R^-1 (C_B - P_AB)
    """
    P_AB = _pab_matrix(pab)
    _check_dims(estA.P, estB.P, P_AB)
    R = _R(estA, estB, P_AB)
    C_A, C_B = estA.C, estB.C
    a_form = C_A - (C_A - P_AB) @ np.linalg.solve(R, C_A - P_AB.T)
    b_form = C_B - (C_B - P_AB.T) @ np.linalg.solve(R, C_B - P_AB)
    ab_form = P_AB + (C_A - P_AB) @ np.linalg.solve(R, C_B - P_AB)
    return symmetrize(a_form), symmetrize(b_form), symmetrize(ab_form)


def information_fusion(estA: SplitEstimate, estB: SplitEstimate) -> FusionResult:
    """Fusion of uncorrelated estimates: precisions add."""
    _check_dims(estA.P, estB.P)
    H_A = inv_pd(estA.C, SingularCovariance, what="C_A")
    H_B = inv_pd(estB.C, SingularCovariance, what="C_B")
    bound = inv_pd(H_A + H_B, SingularCovariance, what="fused precision")
    gains = FusionGains(bound @ H_A, bound @ H_B)
    return FusionResult("if", bound, gains, _fused_mean(gains, estA, estB))


def _weighted_precision_bound(method, H_A, H_B, w_A, w_B, means, params) -> FusionResult:
    """Bound with precision ``w_A H_A + w_B H_B`` and gains ``w_i B H_i``."""
    H = symmetrize(w_A * H_A + w_B * H_B)
    bound = inv_pd(H, SingularCovariance, what="fused precision")
    gains = FusionGains(w_A * bound @ H_A, w_B * bound @ H_B)
    mean = None
    if means is not None and means[0] is not None and means[1] is not None:
        mean = gains.K_A @ np.asarray(means[0], float) + gains.K_B @ np.asarray(means[1], float)
    return FusionResult(method, bound, gains, mean, params)


def ci_bound(C_A, C_B, omega: float, means=None) -> FusionResult:
    """Covariance Intersection: precision ``w C_A^-1 + (1 - w) C_B^-1``."""
    _check_omega(omega)
    C_A = validate_spd(C_A).data
    C_B = validate_spd(C_B).data
    _check_dims(C_A, C_B)
    H_A = inv_pd(C_A, SingularCovariance, what="C_A")
    H_B = inv_pd(C_B, SingularCovariance, what="C_B")
    return _weighted_precision_bound("ci", H_A, H_B, omega, 1.0 - omega, means, {"omega": float(omega)})


def split_precisions(estA: SplitEstimate, estB: SplitEstimate, omega: float):
    """``(P_A + w Q_A)^-1`` and ``(P_B + (1 - w) Q_B)^-1``."""
    _check_omega(omega)
    _check_dims(estA.P, estB.P)
    wbar = 1.0 - omega
    A = inv_pd(estA.P + omega * estA.Q, DegenerateSplit, what=f"P_A + {omega} Q_A")
    B = inv_pd(estB.P + wbar * estB.Q, DegenerateSplit, what=f"P_B + {wbar} Q_B")
    return A, B


def sci_bound(estA: SplitEstimate, estB: SplitEstimate, omega: float) -> FusionResult:
    """Split Covariance Intersection bound and its optimal gains.

    Precision: ``w (P_A + w Q_A)^-1 + (1-w) (P_B + (1-w) Q_B)^-1``. Both
    ``P_A + w Q_A`` and ``P_B + (1-w) Q_B`` must be strictly positive
    definite, including at the endpoints; no regularization is applied.
    """
    A, B = split_precisions(estA, estB, omega)
    wbar = 1.0 - omega
    return _weighted_precision_bound(
        "sci", A, B, omega, wbar, (estA.mean, estB.mean), {"omega": float(omega)}
    )


def _rho_weights(rho: float, omega: float):
    if not 0.0 <= rho <= 1.0:
        raise ParameterOutOfRange(f"rho={rho} outside [0, 1]")
    _check_omega(omega)
    wbar = 1.0 - omega
    den_a = rho + omega * (1.0 - rho)
    den_b = rho + wbar * (1.0 - rho)
    if den_a == 0.0 or den_b == 0.0:
        raise DegenerateDenominator(f"rho={rho}, omega={omega} gives a zero denominator")
    return omega / den_a, wbar / den_b


def rho_bound(C_A, C_B, rho: float, omega: float, means=None) -> FusionResult:
    """Bounded-correlation family, parameterized by omega."""
    w_A, w_B = _rho_weights(rho, omega)
    C_A = validate_spd(C_A).data
    C_B = validate_spd(C_B).data
    _check_dims(C_A, C_B)
    H_A = inv_pd(C_A, SingularCovariance, what="C_A")
    H_B = inv_pd(C_B, SingularCovariance, what="C_B")
    return _weighted_precision_bound(
        "rho", H_A, H_B, w_A, w_B, means, {"rho": float(rho), "omega": float(omega)}
    )


def rho_bound_gamma(C_A, C_B, rho: float, gamma: float, means=None) -> FusionResult:
    """Same family parameterized by ``gamma = (1 - omega) / omega`` in (0, inf).

    Weights are ``1 / (1 + gamma rho)`` and ``1 / (1 + rho / gamma)``.
    """
    if not 0.0 <= rho <= 1.0:
        raise ParameterOutOfRange(f"rho={rho} outside [0, 1]")
    if not (0.0 < gamma < np.inf):
        raise ParameterOutOfRange(f"gamma={gamma} outside (0, inf)")
    C_A = validate_spd(C_A).data
    C_B = validate_spd(C_B).data
    _check_dims(C_A, C_B)
    H_A = inv_pd(C_A, SingularCovariance, what="C_A")
    H_B = inv_pd(C_B, SingularCovariance, what="C_B")
    w_A = 1.0 / (1.0 + gamma * rho)
    w_B = 1.0 / (1.0 + rho / gamma)
    params = {"rho": float(rho), "gamma": float(gamma), "omega": 1.0 / (1.0 + gamma)}
    return _weighted_precision_bound("rho", H_A, H_B, w_A, w_B, means, params)
