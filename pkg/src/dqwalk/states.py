"""Walker states on a bounded 1-D lattice.

A single walker lives on positions -t_max..t_max with a two-level coin, stored
as a dense complex array of shape (2*t_max + 1, 2).  Index 0 of the coin axis
is "up" (moves right under the shift), index 1 is "down" (moves left).  A pair
of walkers is stored as the full joint tensor of shape (W, 2, W, 2); no
product-form shortcut is taken even when the state happens to factorize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

UP = 0
DOWN = 1

INV_SQRT2 = 1.0 / math.sqrt(2.0)

#: symmetry tags a two-walker state can carry
TWO_PARTICLE_KINDS = ("separable", "boson", "fermion")


def _width(t_max):
    return 2 * t_max + 1


@dataclass
class WalkerState:
    """Amplitudes of one walker over (position, coin).

    t_max is the capacity in steps: a walker started at the origin can take at
    most t_max steps before its light cone reaches the array edge.
    """

    t_max: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        expected = (_width(self.t_max), 2)
        if self.amplitudes.shape != expected:
            raise ValueError(
                f"amplitude array has shape {self.amplitudes.shape}, expected {expected}"
            )

    @classmethod
    def zeros(cls, t_max):
        return cls(t_max, np.zeros((_width(t_max), 2), dtype=np.complex128))

    @property
    def width(self):
        return _width(self.t_max)

    def positions(self):
        """Lattice coordinates matching axis 0 of `amplitudes`."""
        return np.arange(-self.t_max, self.t_max + 1)

    def index_of(self, x):
        """Array row for lattice position x."""
        if abs(x) > self.t_max:
            raise ValueError(f"position {x} outside lattice (|x| <= {self.t_max})")
        return x + self.t_max

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def copy(self):
        return WalkerState(self.t_max, self.amplitudes.copy())


@dataclass
class TwoParticleState:
    """Joint amplitudes of two walkers, shape (W, 2, W, 2).

    Axes are (position_1, coin_1, position_2, coin_2).  The symmetry tag
    records how the state was prepared ("separable", "boson", "fermion"); the
    evolution never reads it, but exchange checks and output labeling do.
    """

    t_max: int
    amplitudes: np.ndarray
    symmetry: str = "separable"

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        w = _width(self.t_max)
        if self.amplitudes.shape != (w, 2, w, 2):
            raise ValueError(
                f"amplitude array has shape {self.amplitudes.shape}, expected {(w, 2, w, 2)}"
            )
        if self.symmetry not in TWO_PARTICLE_KINDS:
            raise ValueError(f"unknown symmetry tag {self.symmetry!r}")

    @classmethod
    def zeros(cls, t_max, symmetry="separable"):
        w = _width(t_max)
        return cls(t_max, np.zeros((w, 2, w, 2), dtype=np.complex128), symmetry)

    @property
    def width(self):
        return _width(self.t_max)

    def positions(self):
        return np.arange(-self.t_max, self.t_max + 1)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def copy(self):
        return TwoParticleState(self.t_max, self.amplitudes.copy(), self.symmetry)


def new_walker_state(t_max, position=0, coin=(1.0, 0.0)):
    """Walker localized at `position` with the given (up, down) coin amplitudes.

    The coin spinor must be normalized; amplitudes are stored as given, no
    implicit renormalization.
    """
    cu, cd = complex(coin[0]), complex(coin[1])
    n2 = abs(cu) ** 2 + abs(cd) ** 2
    if abs(n2 - 1.0) > 1e-12:
        raise ValueError(f"coin amplitudes not normalized: |c|^2 = {n2!r}")
    state = WalkerState.zeros(t_max)
    row = state.index_of(position)
    state.amplitudes[row, UP] = cu
    state.amplitudes[row, DOWN] = cd
    return state


def new_two_particle_state(kind, t_max, position=0):
    """Two walkers at `position`, prepared with the requested exchange symmetry.

    separable:  |x,up> (x) |x,down>              walker 1 up, walker 2 down
    boson:      (|up,down> + |down,up>) / sqrt2  symmetrized coin pair
    fermion:    (|up,down> - |down,up>) / sqrt2  antisymmetrized coin pair
    """
    if kind not in TWO_PARTICLE_KINDS:
        raise ValueError(f"unknown two-particle kind {kind!r}")
    state = TwoParticleState.zeros(t_max, symmetry=kind)
    row = t_max + position
    if abs(position) > t_max:
        raise ValueError(f"position {position} outside lattice (|x| <= {t_max})")
    if kind == "separable":
        state.amplitudes[row, UP, row, DOWN] = 1.0
    elif kind == "boson":
        state.amplitudes[row, UP, row, DOWN] = INV_SQRT2
        state.amplitudes[row, DOWN, row, UP] = INV_SQRT2
    else:
        state.amplitudes[row, UP, row, DOWN] = INV_SQRT2
        state.amplitudes[row, DOWN, row, UP] = -INV_SQRT2
    return state


def inner_product(a, b):
    """<a|b> with the conjugate on the first argument.

    Both states must live on the same lattice and be of the same kind.
    """
    if type(a) is not type(b):
        raise ValueError("inner product between different state kinds")
    if a.t_max != b.t_max:
        raise ValueError("inner product between different lattice sizes")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def exchange_residual(state):
    """Max deviation from the tagged exchange symmetry of a two-walker state.

    Bosonic states satisfy A[x1,c1,x2,c2] = A[x2,c2,x1,c1], fermionic states
    the same with a minus sign.  Returns the largest absolute violation; a
    symmetry-preserving evolution keeps this at rounding level.
    """
    if not isinstance(state, TwoParticleState):
        raise ValueError("exchange symmetry is defined for two-particle states")
    if state.symmetry == "separable":
        raise ValueError("separable states carry no exchange symmetry to check")
    swapped = np.transpose(state.amplitudes, (2, 3, 0, 1))
    sign = 1.0 if state.symmetry == "boson" else -1.0
    return float(np.max(np.abs(state.amplitudes - sign * swapped)))


def support_radius(state):
    """Largest |x| holding any nonzero amplitude; -1 for the zero state."""
    if isinstance(state, TwoParticleState):
        occ = np.abs(state.amplitudes)
        occ1 = occ.sum(axis=(1, 2, 3))
        occ2 = occ.sum(axis=(0, 1, 3))
        hit = np.nonzero((occ1 > 0) | (occ2 > 0))[0]
    else:
        hit = np.nonzero(np.abs(state.amplitudes).sum(axis=1) > 0)[0]
    if hit.size == 0:
        return -1
    return int(max(abs(hit[0] - state.t_max), abs(hit[-1] - state.t_max)))
