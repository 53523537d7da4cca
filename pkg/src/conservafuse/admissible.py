"""Admissible cross-covariances: membership, sampling, worst-case elements.

A cross-covariance ``P_AB`` is admissible when ``[[P_A, P_AB], [P_AB', P_B]]``
is PSD. Every ``P_A^{1/2} W P_B^{1/2}`` with ``W'W <= I`` is admissible, which
is how all samplers here build their outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSplit, DimensionMismatch, ZeroDirection, ZeroVector
from .fusion import SplitEstimate
from .precision import SciPrecisionCurve, argmax_omega, argmax_omega_batch
from .spd import DEFAULT_TOL, inv_pd, spectral_scale, sqrt_psd, symmetrize

ADMISSIBLE_TOL = 1e-9
DEFAULT_MIX = (0.7, 0.2, 0.1)

_MASK64 = (1 << 64) - 1


def child_seed(seed: int, index: int) -> int:
    """Deterministic 63-bit child seed via one splitmix64 step on ``seed + index``."""
    z = (int(seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) >> 1


@dataclass(frozen=True, eq=False)
class CrossCovariance:
    matrix: np.ndarray
    contraction: np.ndarray | None = None
    omega: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=float))

    def to_json(self) -> dict:
        out = {"P_AB": self.matrix.tolist()}
        if self.omega is not None:
            out["omega"] = self.omega
        return out

    @classmethod
    def from_json(cls, obj) -> "CrossCovariance":
        if isinstance(obj, dict):
            return cls(np.asarray(obj["P_AB"], dtype=float), omega=obj.get("omega"))
        return cls(np.asarray(obj, dtype=float))


def _matrix(pab) -> np.ndarray:
    return np.asarray(getattr(pab, "matrix", pab), dtype=float)


def block_matrix(P_AB, P_A, P_B) -> np.ndarray:
    P_AB = np.asarray(P_AB, dtype=float)
    return np.block([[np.asarray(P_A, float), P_AB], [P_AB.T, np.asarray(P_B, float)]])


def is_admissible(pab, P_A, P_B, tol: float = ADMISSIBLE_TOL) -> bool:
    """True iff the joint covariance ``[[P_A, P_AB], [P_AB', P_B]]`` is PSD."""
    P_AB = _matrix(pab)
    P_A = np.asarray(P_A, dtype=float)
    P_B = np.asarray(P_B, dtype=float)
    if not (P_AB.shape == P_A.shape == P_B.shape):
        raise DimensionMismatch(f"shapes {P_A.shape}, {P_AB.shape}, {P_B.shape}")
    M = symmetrize(block_matrix(P_AB, P_A, P_B))
    return bool(np.linalg.eigvalsh(M)[0] >= -tol * spectral_scale(M))


def from_contraction(Omega, P_A, P_B, omega=None) -> CrossCovariance:
    Omega = np.asarray(Omega, dtype=float)
    return CrossCovariance(sqrt_psd(P_A) @ Omega @ sqrt_psd(P_B), Omega, omega)


def random_contraction(rng: np.random.Generator, n: int, u: float | None = None) -> np.ndarray:
    """Gaussian matrix rescaled to spectral norm ``u`` (uniform on [0, 1] by default)."""
    G = rng.standard_normal((n, n))
    if u is None:
        u = rng.uniform()
    sigma = np.linalg.norm(G, 2)
    if sigma == 0.0:
        return np.zeros((n, n))
    return (u / sigma) * G


def sample_cross_cov(P_A, P_B, seed: int, u: float | None = None) -> CrossCovariance:
    """Random admissible ``P_AB`` from a seeded uniform-contraction draw.

    ``u`` fixes the spectral norm of the contraction; ``u = 0`` yields ``P_AB = 0``.
    """
    P_A = np.asarray(P_A, dtype=float)
    rng = np.random.default_rng(seed)
    return from_contraction(random_contraction(rng, P_A.shape[0], u), P_A, P_B)


def rank_one_cross_cov(P_A, P_B, direction) -> CrossCovariance:
    """``P_A^{1/2} d d' P_B^{1/2}`` for a unit vector ``d`` (normalized if needed)."""
    d = np.asarray(direction, dtype=float).reshape(-1)
    norm = np.linalg.norm(d)
    if norm == 0.0:
        raise ZeroDirection("direction must be nonzero")
    d = d / norm
    return from_contraction(np.outer(d, d), P_A, P_B)


def _require_strict_split(estA: SplitEstimate, estB: SplitEstimate):
    for name, P in (("P_A", estA.P), ("P_B", estB.P)):
        if np.linalg.eigvalsh(P)[0] <= DEFAULT_TOL.psd * spectral_scale(P):
            raise DegenerateSplit(f"{name} must be strictly positive definite for the worst-case construction")


def worst_case_cross_cov(x, estA: SplitEstimate, estB: SplitEstimate, curve: SciPrecisionCurve | None = None):
    """Admissible ``P_AB*`` minimizing ``x' C_F*(P_AB)^-1 x``.

    Returns ``(CrossCovariance, omega0, case)``. The construction is a
    rank-one contraction chosen so that the Bar-Shalom-Campo precision for
    ``P_AB*`` agrees with the SCI precision at ``omega0`` along ``x``.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if not np.any(x):
        raise ZeroVector("direction must be nonzero")
    _require_strict_split(estA, estB)
    curve = curve or SciPrecisionCurve(estA, estB)
    case, omega0 = argmax_omega(curve, x)
    P_A, P_B = estA.P, estB.P
    sA, sB = sqrt_psd(P_A), sqrt_psd(P_B)
    if case == 1:
        B1 = curve.B(1.0)
        v = B1 @ x
        Omega = np.outer(inv_pd(sA) @ x, sB @ v) / (v @ P_B @ v)
    elif case == 2:
        A1 = curve.A(1.0)
        u = A1 @ x
        Omega = np.outer(sA @ u, inv_pd(sB) @ x) / (u @ P_A @ u)
    else:
        u = curve.A(omega0) @ x
        v = curve.B(1.0 - omega0) @ x
        gamma = u @ P_A @ u
        Omega = np.outer(sA @ u, sB @ v) / gamma
    pab = CrossCovariance(sA @ Omega @ sB, Omega, omega0)
    return pab, omega0, case


def worst_case_stack(xs, estA: SplitEstimate, estB: SplitEstimate, curve: SciPrecisionCurve | None = None):
    """Vectorized :func:`worst_case_cross_cov` over the rows of ``xs``.

    Returns ``(stack, omega0, case)`` with ``stack`` of shape ``(m, n, n)``.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    _require_strict_split(estA, estB)
    curve = curve or SciPrecisionCurve(estA, estB)
    case, omega0 = argmax_omega_batch(curve, xs)
    a, b = estA, estB
    # Every case is P_A^{1/2} W P_B^{1/2} with W = s_A p q' s_B / den, so P_AB = P_A p q' P_B / den.
    w = omega0[:, None, None]
    u = np.linalg.solve(a.P[None] + w * a.Q[None], xs[..., None])[..., 0]
    v = np.linalg.solve(b.P[None] + (1.0 - w) * b.Q[None], xs[..., None])[..., 0]
    p, q = u.copy(), v.copy()
    den = np.einsum("ki,ij,kj->k", u, a.P, u)
    one = case == 1
    if np.any(one):
        p[one] = np.linalg.solve(a.P, xs[one].T).T
        den[one] = np.einsum("ki,ij,kj->k", v[one], b.P, v[one])
    two = case == 2
    if np.any(two):
        q[two] = np.linalg.solve(b.P, xs[two].T).T
    stack = np.einsum("ij,kj,kl,lm->kim", a.P, p, q, b.P) / den[:, None, None]
    return stack, omega0, case


def sample_admissible(
    estA: SplitEstimate,
    estB: SplitEstimate,
    count: int,
    seed: int,
    mix=DEFAULT_MIX,
    curve: SciPrecisionCurve | None = None,
):
    """Batch of admissible cross-covariances from three families.

    Families, in ``mix`` proportions: uniform-contraction Gaussian, rank-one
    boundary contractions ``d1 d2'`` over random unit vectors, and worst-case
    constructions at random directions. The worst-case share falls back to
    Gaussian when ``P_A`` or ``P_B`` is singular.

    Returns ``(stack, family)`` with ``stack`` of shape ``(count, n, n)`` and
    ``family`` an int array (0, 1, 2).
    """
    n = estA.dim
    rng = np.random.default_rng(seed)
    weights = np.asarray(mix, dtype=float)
    weights = weights / weights.sum()
    n_rank = int(round(count * weights[1]))
    n_worst = int(round(count * weights[2]))
    try:
        _require_strict_split(estA, estB)
    except DegenerateSplit:
        n_worst = 0
    n_gauss = count - n_rank - n_worst

    sA, sB = sqrt_psd(estA.P), sqrt_psd(estB.P)
    G = rng.standard_normal((n_gauss, n, n))
    sig = np.linalg.norm(G, ord=2, axis=(1, 2))
    u = rng.uniform(size=n_gauss)
    Omega_g = G * (u / np.where(sig > 0, sig, 1.0))[:, None, None]

    d1 = rng.standard_normal((n_rank, n))
    d2 = rng.standard_normal((n_rank, n))
    d1 /= np.linalg.norm(d1, axis=1, keepdims=True)
    d2 /= np.linalg.norm(d2, axis=1, keepdims=True)
    Omega_r = d1[:, :, None] * d2[:, None, :]

    Omega = np.concatenate([Omega_g, Omega_r], axis=0)
    stack = sA[None] @ Omega @ sB[None]
    family = [np.zeros(n_gauss, int), np.ones(n_rank, int)]
    if n_worst:
        curve = curve or SciPrecisionCurve(estA, estB)
        xs = rng.standard_normal((n_worst, n))
        worst = worst_case_stack(xs, estA, estB, curve)[0]
        stack = np.concatenate([stack, worst], axis=0)
        family.append(np.full(n_worst, 2))
    return stack, np.concatenate(family)
