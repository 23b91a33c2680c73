"""Position-space observables: distributions and spreading variance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import TwoParticleState, WalkerState

NORM_TOL = 1e-9


@dataclass
class PositionDistribution:
    """Probabilities over lattice positions -t_max..t_max."""

    t_max: int
    probabilities: np.ndarray

    def positions(self):
        return np.arange(-self.t_max, self.t_max + 1)


def position_distribution(state, particle=0):
    """Probability of finding the walker at each position (coin traced out).

    For a two-walker state this returns the single-particle marginal of the
    chosen particle (0 or 1); symmetrized states give the same marginal for
    both.
    """
    norm2 = np.vdot(state.amplitudes, state.amplitudes).real
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ValueError(f"state norm^2 = {norm2!r} deviates from 1 beyond {NORM_TOL}")
    weights = np.abs(state.amplitudes) ** 2
    if isinstance(state, TwoParticleState):
        if particle not in (0, 1):
            raise ValueError("particle must be 0 or 1")
        axes = (1, 2, 3) if particle == 0 else (0, 1, 3)
        probs = weights.sum(axis=axes)
    elif isinstance(state, WalkerState):
        probs = weights.sum(axis=1)
    else:
        raise TypeError(f"unsupported state type {type(state).__name__}")
    return PositionDistribution(state.t_max, probs)


def position_variance(dist):
    """Var(x) = <x^2> - <x>^2 of a position distribution."""
    x = dist.positions().astype(float)
    p = dist.probabilities
    total = p.sum()
    if not np.isfinite(total) or abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"probabilities sum to {total!r}, expected 1")
    mean = float(x @ p)
    return float((x * x) @ p - mean * mean)
