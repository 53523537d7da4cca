"""Validated symmetric matrices, Loewner comparisons and ellipse sampling."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionNotTwo,
    NotPositiveDefinite,
    NotPositiveSemiDefinite,
    NotSquare,
    NotSymmetric,
    SingularMatrix,
)

TOL_ENV_VAR = "CONSERVAFUSE_TOL"


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances, all scaled by :func:`spectral_scale`."""

    sym: float = 1e-9
    psd: float = 1e-9

    @classmethod
    def from_env(cls) -> "Tolerances":
        raw = os.environ.get(TOL_ENV_VAR)
        if not raw:
            return cls()
        value = float(raw)
        if not np.isfinite(value) or value <= 0:
            raise ValueError(f"{TOL_ENV_VAR} must be a positive float, got {raw!r}")
        return cls(sym=value, psd=value)


DEFAULT_TOL = Tolerances.from_env()


def spectral_scale(M) -> float:
    """max(1, largest absolute eigenvalue) of the symmetric part of ``M``."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(np.linalg.eigvalsh(symmetrize(M))))))


def symmetrize(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def _as_square(raw) -> np.ndarray:
    M = np.array(raw, dtype=float)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NotSymmetric("matrix has non-finite entries")
    return M


@dataclass(frozen=True, eq=False)
class SpdMatrix:
    """Symmetric positive semi-definite matrix that passed :func:`validate_spd`.

    Construct through :func:`validate_spd`; the stored array is read-only.
    """

    data: np.ndarray = field(repr=False)
    strict: bool = False

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.data
        return self.data.astype(dtype)

    def to_json(self) -> dict:
        return {"dim": self.dim, "data": self.data.tolist()}

    def __repr__(self) -> str:
        return f"SpdMatrix(dim={self.dim}, strict={self.strict}, data={self.data.tolist()})"


def validate_spd(raw, strict: bool = False, tol: Tolerances | None = None) -> SpdMatrix:
    """Check symmetry and (semi-)definiteness without repairing anything.

    The stored matrix is the exact symmetric part of ``raw``; nothing is
    clipped or regularized.
    """
    tol = tol or DEFAULT_TOL
    M = _as_square(raw)
    scale = spectral_scale(M)
    asym = float(np.max(np.abs(M - M.T))) if M.size else 0.0
    if asym > tol.sym * scale:
        raise NotSymmetric(f"max |M_ij - M_ji| = {asym:.3e} exceeds {tol.sym:.1e} * {scale:.3e}")
    M = symmetrize(M)
    lam_min = float(np.linalg.eigvalsh(M)[0])
    if strict and lam_min < tol.psd * scale:
        raise NotPositiveDefinite(f"smallest eigenvalue {lam_min:.6e} is not strictly positive")
    if lam_min < -tol.psd * scale:
        raise NotPositiveSemiDefinite(f"smallest eigenvalue {lam_min:.6e} is negative")
    M.setflags(write=False)
    return SpdMatrix(M, strict=strict)


def loewner_leq(A, B, tol: float | None = None) -> bool:
    """True iff ``A <= B`` in the Loewner order, i.e. ``B - A`` is PSD."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    tol = DEFAULT_TOL.psd if tol is None else tol
    diff = symmetrize(B - A)
    scale = max(spectral_scale(diff), spectral_scale(A), spectral_scale(B))
    return bool(np.linalg.eigvalsh(diff)[0] >= -tol * scale)


def loewner_slack(A, B) -> float:
    """Smallest eigenvalue of ``B - A``; negative means ``A <= B`` fails."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    return float(np.linalg.eigvalsh(symmetrize(B - A))[0])


def sqrt_psd(M, tol: Tolerances | None = None) -> np.ndarray:
    """Principal symmetric square root.

    Eigenvalues in ``[-psd_tol * scale, 0)`` are treated as zero.
    """
    tol = tol or DEFAULT_TOL
    M = symmetrize(_as_square(np.asarray(M)))
    lam, V = np.linalg.eigh(M)
    if lam[0] < -tol.psd * spectral_scale(M):
        raise NotPositiveSemiDefinite(f"smallest eigenvalue {lam[0]:.6e} is negative")
    root = (V * np.sqrt(np.clip(lam, 0.0, None))) @ V.T
    return symmetrize(root)


def inv_pd(M, error=SingularMatrix, tol: Tolerances | None = None, what: str = "matrix") -> np.ndarray:
    """Inverse of a strictly positive definite matrix, raising ``error`` otherwise."""
    tol = tol or DEFAULT_TOL
    M = symmetrize(M)
    lam = np.linalg.eigvalsh(M)
    if lam[0] <= tol.psd * spectral_scale(M):
        raise error(f"{what} is not strictly positive definite (smallest eigenvalue {lam[0]:.3e})")
    return symmetrize(np.linalg.inv(M))


@dataclass(frozen=True, eq=False)
class Ellipse2D:
    """Boundary samples of E(P) = {x : x' P^-1 x <= 1}."""

    theta: np.ndarray
    points: np.ndarray

    def residuals(self, P) -> np.ndarray:
        Pinv = np.linalg.inv(np.asarray(P, dtype=float))
        return np.einsum("ki,ij,kj->k", self.points, Pinv, self.points) - 1.0


def ellipse_boundary(P, count: int = 360) -> Ellipse2D:
    """``count`` points ``P^{1/2} [cos t, sin t]`` with ``t = 2 pi k / count``."""
    P = np.asarray(P, dtype=float)
    if P.shape != (2, 2):
        raise DimensionNotTwo(f"ellipse needs a 2x2 matrix, got {P.shape}")
    if count < 1:
        raise ValueError("count must be positive")
    P = validate_spd(P).data
    if np.linalg.eigvalsh(P)[0] <= DEFAULT_TOL.psd * spectral_scale(P):
        raise SingularMatrix("ellipse of a singular matrix is degenerate")
    theta = 2.0 * np.pi * np.arange(count) / count
    circle = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return Ellipse2D(theta=theta, points=circle @ sqrt_psd(P).T)
