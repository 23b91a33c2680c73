"""Binary phase-disorder maps.

A map assigns an extra phase of 0 or pi to every (step, position) cell of a
walk of n_steps steps on the lattice -n_steps..n_steps.  Only the pi cells are
stored (as a boolean mask of shape (n_steps, 2*n_steps + 1); row t-1 drives
step t).  Static maps draw a single row and repeat it every step; dynamic maps
draw every row independently; kind "none" is the clean walk.

Two sampling semantics are supported:

  bernoulli-uniform   each cell is selected with probability p, and a selected
                      cell is set to pi with probability 1/2 (so the expected
                      pi fraction is p/2).  This is the default.
  exact-pi-fraction   exactly floor(p*N) cells are pi, chosen uniformly
                      without replacement; N counts the independently drawn
                      cells (one row for static maps, the whole table for
                      dynamic ones).

All sampling is driven by numpy's default_rng seeded with the map seed, so a
(kind, p, n_steps, semantics, seed) tuple reproduces the identical map on any
platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("none", "static", "dynamic")
SEMANTICS = ("bernoulli-uniform", "exact-pi-fraction")


@dataclass(frozen=True, eq=False)
class PhaseMap:
    kind: str
    p: float
    n_steps: int
    semantics: str
    seed: int
    pi_mask: np.ndarray = field(repr=False)

    @property
    def width(self):
        return 2 * self.n_steps + 1

    def row(self, step_index):
        """Boolean pi-cells for step step_index (1-based)."""
        if not 1 <= step_index <= self.n_steps:
            raise ValueError(
                f"step index {step_index} outside 1..{self.n_steps}"
            )
        return self.pi_mask[step_index - 1]

    def step_signs(self, step_index, t_max):
        """Multiplicative signs e^{i*dphi} (+1 or -1) for step step_index,
        aligned to a state lattice of half-width t_max.

        Positions beyond the map's own lattice carry no disorder; they can
        only be reached by walkers prepared away from the origin.
        """
        row = self.row(step_index)
        signs = np.ones(2 * t_max + 1)
        r = min(self.n_steps, t_max)
        c_map, c_st = self.n_steps, t_max
        signs[c_st - r : c_st + r + 1] = 1.0 - 2.0 * row[c_map - r : c_map + r + 1]
        return signs


def validate_disorder(kind, n_steps, p, semantics):
    """Reject invalid disorder parameters; shared by maps and ensemble configs."""
    if kind not in KINDS:
        raise ValueError(f"unknown disorder kind {kind!r}; expected one of {KINDS}")
    if semantics not in SEMANTICS:
        raise ValueError(
            f"unknown disorder semantics {semantics!r}; expected one of {SEMANTICS}"
        )
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"disorder degree p = {p!r} outside [0, 1]")
    if kind == "none" and p != 0.0:
        raise ValueError('kind "none" requires p = 0')


def generate_map(kind, n_steps, p, semantics="bernoulli-uniform", seed=0):
    """Draw a phase map.  See the module docstring for the sampling rules."""
    validate_disorder(kind, n_steps, p, semantics)
    width = 2 * n_steps + 1
    rng = np.random.default_rng(seed)
    if kind == "none":
        mask = np.zeros((n_steps, width), dtype=bool)
    elif semantics == "bernoulli-uniform":
        shape = (width,) if kind == "static" else (n_steps, width)
        selected = rng.random(shape) < p
        flips = rng.random(shape) < 0.5
        mask = selected & flips
        if kind == "static":
            mask = np.tile(mask, (n_steps, 1))
    else:
        if kind == "static":
            n_pi = math.floor(p * width)
            row = np.zeros(width, dtype=bool)
            row[rng.choice(width, size=n_pi, replace=False)] = True
            mask = np.tile(row, (n_steps, 1))
        else:
            n_cells = n_steps * width
            n_pi = math.floor(p * n_cells)
            flat = np.zeros(n_cells, dtype=bool)
            flat[rng.choice(n_cells, size=n_pi, replace=False)] = True
            mask = flat.reshape(n_steps, width)
    return PhaseMap(kind, float(p), int(n_steps), semantics, int(seed), mask)


def disorder_fraction(pmap):
    """Fraction of map cells set to pi."""
    return float(pmap.pi_mask.mean())


def map_to_json(pmap):
    """Portable dict form of a map: metadata plus the row-major 0/1 entries."""
    return {
        "kind": pmap.kind,
        "p": pmap.p,
        "T": pmap.n_steps,
        "semantics": pmap.semantics,
        "seed": pmap.seed,
        "entries": pmap.pi_mask.astype(int).ravel().tolist(),
    }


def map_from_json(obj):
    """Rebuild a PhaseMap from its dict form, validating shape and content."""
    required = {"kind", "p", "T", "semantics", "seed", "entries"}
    missing = required - set(obj)
    if missing:
        raise ValueError(f"phase-map object missing keys: {sorted(missing)}")
    kind, p, n_steps = obj["kind"], obj["p"], obj["T"]
    semantics, seed, entries = obj["semantics"], obj["seed"], obj["entries"]
    validate_disorder(kind, n_steps, p, semantics)
    width = 2 * n_steps + 1
    if len(entries) != n_steps * width:
        raise ValueError(
            f"entries has {len(entries)} cells, expected {n_steps}*{width}"
        )
    flat = np.asarray(entries)
    if not np.isin(flat, (0, 1)).all():
        raise ValueError("entries must contain only 0 and 1")
    mask = flat.astype(bool).reshape(n_steps, width)
    if kind == "none" and mask.any():
        raise ValueError('kind "none" map has nonzero entries')
    if kind == "static" and not (mask == mask[0]).all():
        raise ValueError("static map rows differ between steps")
    return PhaseMap(kind, float(p), int(n_steps), semantics, int(seed), mask)
