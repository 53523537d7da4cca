"""Reference problem instances and random instance generators."""

from __future__ import annotations

import numpy as np

from .fusion import SplitEstimate

# Worked 2-D example used by the figure data and the acceptance checks.
REF_P_A = np.array([[1.0, -1.0], [-1.0, 4.0]])
REF_Q_A = np.array([[1.0, 0.0], [0.0, 4.0]])
REF_P_B = np.array([[9.0, 2.0], [2.0, 1.0]])
REF_Q_B = np.array([[4.0, 0.0], [0.0, 2.0]])
REF_C_A = REF_P_A + REF_Q_A
REF_C_B = REF_P_B + REF_Q_B
REF_PAB0 = np.array([[2.0, 0.0], [-4.5, -1.0]])
REF_B_F = np.array([[6.0, 0.0], [0.0, 6.0]])


def reference_estimates():
    return SplitEstimate(REF_P_A, REF_Q_A), SplitEstimate(REF_P_B, REF_Q_B)


def identity_estimates(n: int = 2):
    I = np.eye(n)
    return SplitEstimate(I, I), SplitEstimate(I, I)


def figure_directions(count: int = 5) -> np.ndarray:
    i = np.arange(count)
    return np.stack([np.cos(np.pi * i / count), np.sin(np.pi * i / count)], axis=1)


def random_spd(rng: np.random.Generator, n: int, ridge: float = 0.1) -> np.ndarray:
    """Wishart-like ``G G' / n + ridge I`` (strictly positive definite)."""
    G = rng.standard_normal((n, n))
    return G @ G.T / n + ridge * np.eye(n)


def random_split_pair(rng: np.random.Generator, n: int, ridge: float = 0.1):
    """Two split estimates with strictly positive definite P and Q."""
    a = SplitEstimate(random_spd(rng, n, ridge), random_spd(rng, n, ridge))
    b = SplitEstimate(random_spd(rng, n, ridge), random_spd(rng, n, ridge))
    return a, b
