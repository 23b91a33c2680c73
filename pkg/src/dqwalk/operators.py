"""One evolution step of the walk and its parameter derivative.

A step applies, in order: the position-dependent phase P (the encoded phase
phi plus the map's 0/pi offset, imprinted on the up component only), the
balanced coin C, and the coin-conditioned shift S.  The alternative order with
the phase imprinted after the shift is kept behind a toggle for sensitivity
checks; it is not the default.

The derivative of the step operator with respect to phi acts like P with every
up amplitude multiplied by an extra factor of i and every down amplitude
dropped.  Co-evolving (psi, dpsi) with the product rule gives the exact
derivative state at every step, which is what the Fisher-information layer
consumes; no finite differencing happens here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .disorder import PhaseMap
from .errors import BoundaryError
from .states import DOWN, INV_SQRT2, UP, TwoParticleState, WalkerState

PHASE_FIRST = "phase-first"
PHASE_LAST = "phase-last"
OPERATOR_ORDERS = (PHASE_FIRST, PHASE_LAST)


@dataclass(frozen=True)
class StepContext:
    """Everything one step needs: encoded phase, step number, disorder map."""

    phi: float
    step_index: int
    phase_map: PhaseMap
    order: str = PHASE_FIRST

    def __post_init__(self):
        if not 1 <= self.step_index <= self.phase_map.n_steps:
            raise ValueError(
                f"step index {self.step_index} outside map range 1..{self.phase_map.n_steps}"
            )
        if self.order not in OPERATOR_ORDERS:
            raise ValueError(f"unknown operator order {self.order!r}")


@dataclass
class DerivativePair:
    """A state together with its derivative with respect to the encoded phase."""

    psi: object
    dpsi: object

    @classmethod
    def initial(cls, state):
        """Pair for a phi-independent initial state: dpsi = 0."""
        if isinstance(state, TwoParticleState):
            zero = TwoParticleState.zeros(state.t_max, state.symmetry)
        else:
            zero = WalkerState.zeros(state.t_max)
        return cls(state, zero)


def _phase_factor(ctx, t_max):
    """Complex up-component multiplier e^{i(phi + dphi(x))} per position."""
    return np.exp(1j * ctx.phi) * ctx.phase_map.step_signs(ctx.step_index, t_max)


def apply_phase(state, ctx):
    """P: multiply the up component at x by e^{i(phi + dphi(t, x))}."""
    a = state.amplitudes
    out = np.empty_like(a)
    out[:, UP] = a[:, UP] * _phase_factor(ctx, state.t_max)
    out[:, DOWN] = a[:, DOWN]
    return WalkerState(state.t_max, out)


def apply_phase_derivative(state, ctx):
    """dP/dphi: i * e^{i(phi + dphi)} on the up component, zero on down."""
    a = state.amplitudes
    out = np.zeros_like(a)
    out[:, UP] = a[:, UP] * (1j * _phase_factor(ctx, state.t_max))
    return WalkerState(state.t_max, out)


def apply_coin(state):
    """Balanced coin: up -> (up+down)/sqrt2, down -> (up-down)/sqrt2."""
    a = state.amplitudes
    out = np.empty_like(a)
    out[:, UP] = (a[:, UP] + a[:, DOWN]) * INV_SQRT2
    out[:, DOWN] = (a[:, UP] - a[:, DOWN]) * INV_SQRT2
    return WalkerState(state.t_max, out)


def apply_shift(state):
    """Coin-conditioned translation: up moves to x+1, down to x-1.

    Raises BoundaryError if any amplitude would cross the lattice edge, since
    a silent wrap or truncation would corrupt every later step.
    """
    a = state.amplitudes
    if a[-1, UP] != 0 or a[0, DOWN] != 0:
        raise BoundaryError(
            f"walker support reached the lattice edge (t_max = {state.t_max})"
        )
    out = np.zeros_like(a)
    out[1:, UP] = a[:-1, UP]
    out[:-1, DOWN] = a[1:, DOWN]
    return WalkerState(state.t_max, out)


def step(state, ctx):
    """One full step of the walk on a single walker."""
    if ctx.order == PHASE_FIRST:
        return apply_shift(apply_coin(apply_phase(state, ctx)))
    return apply_phase(apply_shift(apply_coin(state)), ctx)


def step_with_derivative(pair, ctx):
    """Advance (psi, dpsi) one step.

    The psi component follows exactly the same code path as `step`; dpsi picks
    up the inhomogeneous term from differentiating the phase operator:

        phase-first:  dpsi' = S C (dP psi + P dpsi)
        phase-last:   dpsi' = dP S C psi + P S C dpsi
    """
    psi, dpsi = pair.psi, pair.dpsi
    if ctx.order == PHASE_FIRST:
        psi_next = apply_shift(apply_coin(apply_phase(psi, ctx)))
        mixed = apply_phase_derivative(psi, ctx)
        mixed.amplitudes += apply_phase(dpsi, ctx).amplitudes
        dpsi_next = apply_shift(apply_coin(mixed))
    else:
        sc_psi = apply_shift(apply_coin(psi))
        psi_next = apply_phase(sc_psi, ctx)
        dpsi_next = apply_phase_derivative(sc_psi, ctx)
        dpsi_next.amplitudes += apply_phase(
            apply_shift(apply_coin(dpsi)), ctx
        ).amplitudes
    return DerivativePair(psi_next, dpsi_next)


# -- two-walker evolution ----------------------------------------------------
#
# The joint step is U (x) U with both factors driven by the same phase map and
# the same phi.  Each factor acts on its own (position, coin) axis pair of the
# (W, 2, W, 2) tensor; the helpers below are the single-walker primitives
# rewritten against either axis pair.


def _p_phase(a, factor, particle):
    out = np.empty_like(a)
    if particle == 0:
        out[:, UP] = a[:, UP] * factor[:, None, None]
        out[:, DOWN] = a[:, DOWN]
    else:
        out[..., UP] = a[..., UP] * factor
        out[..., DOWN] = a[..., DOWN]
    return out


def _p_dphase(a, factor, particle):
    out = np.zeros_like(a)
    if particle == 0:
        out[:, UP] = a[:, UP] * (1j * factor)[:, None, None]
    else:
        out[..., UP] = a[..., UP] * (1j * factor)
    return out


def _p_coin(a, particle):
    out = np.empty_like(a)
    if particle == 0:
        up, down = a[:, UP], a[:, DOWN]
        out[:, UP] = (up + down) * INV_SQRT2
        out[:, DOWN] = (up - down) * INV_SQRT2
    else:
        up, down = a[..., UP], a[..., DOWN]
        out[..., UP] = (up + down) * INV_SQRT2
        out[..., DOWN] = (up - down) * INV_SQRT2
    return out


def _p_shift(a, particle, t_max):
    out = np.zeros_like(a)
    if particle == 0:
        if a[-1, UP].any() or a[0, DOWN].any():
            raise BoundaryError(
                f"walker 1 support reached the lattice edge (t_max = {t_max})"
            )
        out[1:, UP] = a[:-1, UP]
        out[:-1, DOWN] = a[1:, DOWN]
    else:
        if a[:, :, -1, UP].any() or a[:, :, 0, DOWN].any():
            raise BoundaryError(
                f"walker 2 support reached the lattice edge (t_max = {t_max})"
            )
        out[:, :, 1:, UP] = a[:, :, :-1, UP]
        out[:, :, :-1, DOWN] = a[:, :, 1:, DOWN]
    return out


def _u_one(a, factor, particle, order, t_max, derivative=False):
    """Apply this particle's step factor (or its phi derivative) to the tensor."""
    if order == PHASE_FIRST:
        if derivative:
            b = _p_dphase(a, factor, particle)
        else:
            b = _p_phase(a, factor, particle)
        return _p_shift(_p_coin(b, particle), particle, t_max)
    b = _p_shift(_p_coin(a, particle), particle, t_max)
    if derivative:
        return _p_dphase(b, factor, particle)
    return _p_phase(b, factor, particle)


def two_particle_step(state, ctx):
    """One joint step: the single-walker unitary applied to each particle."""
    t_max = state.t_max
    factor = _phase_factor(ctx, t_max)
    a = _u_one(state.amplitudes, factor, 0, ctx.order, t_max)
    a = _u_one(a, factor, 1, ctx.order, t_max)
    return TwoParticleState(t_max, a, state.symmetry)


def two_particle_step_with_derivative(pair, ctx):
    """Advance a joint (psi, dpsi) pair one step.

    Product rule over the two factors: with U0, U1 the per-particle unitaries,

        dpsi' = U1 dU0 psi + dU1 U0 psi + U1 U0 dpsi.

    The psi component repeats the `two_particle_step` pipeline exactly.
    """
    psi, dpsi = pair.psi, pair.dpsi
    t_max = psi.t_max
    order = ctx.order
    factor = _phase_factor(ctx, t_max)
    a, da = psi.amplitudes, dpsi.amplitudes

    u0_a = _u_one(a, factor, 0, order, t_max)
    psi_next = _u_one(u0_a, factor, 1, order, t_max)

    d_next = _u_one(_u_one(a, factor, 0, order, t_max, derivative=True),
                    factor, 1, order, t_max)
    d_next += _u_one(u0_a, factor, 1, order, t_max, derivative=True)
    d_next += _u_one(_u_one(da, factor, 0, order, t_max), factor, 1, order, t_max)

    return DerivativePair(
        TwoParticleState(t_max, psi_next, psi.symmetry),
        TwoParticleState(t_max, d_next, psi.symmetry),
    )
