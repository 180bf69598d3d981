"""Mode grid, memory codes and evolved states.

A memory is labelled by one real squeeze angle ``theta`` per field mode.
The continuum of mode labels is replaced by a finite, ordered grid, so
infinite-volume statements become trends in the number of modes.

Units: hbar = k_B = 1, and a mode's energy defaults to its frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._validation import check_same_grid, check_time
from .exceptions import (
    EmptyGrid,
    LengthMismatch,
    NegativeFrequency,
    NegativeOccupation,
    NonFinite,
    NonIncreasingIndex,
    NonPositiveEnergy,
    NonPositiveGamma,
)

__all__ = [
    "Mode",
    "ModeGrid",
    "MemoryCode",
    "EvolvedState",
    "build_grid",
    "code_from_occupations",
    "code_distance_at_zero",
    "CodeDistance",
]


@dataclass(frozen=True)
class Mode:
    """One field degree of freedom.

    Attributes
    ----------
    index : int
        Integer label of the mode.
    omega : float
        Angular frequency, >= 0.
    gamma : float
        Damping constant, > 0.
    energy : float
        Mode energy, > 0. Defaults to ``omega`` in :func:`build_grid`.
    """

    index: int
    omega: float
    gamma: float
    energy: float

    def __post_init__(self):
        for name in ("omega", "gamma", "energy"):
            if not math.isfinite(getattr(self, name)):
                raise NonFinite(self.index, f"mode {self.index}: {name} is not finite")
        if self.gamma <= 0:
            raise NonPositiveGamma(self.index, f"mode {self.index}: gamma must be > 0")
        if self.omega < 0:
            raise NegativeFrequency(self.index, f"mode {self.index}: omega must be >= 0")
        if self.energy <= 0:
            raise NonPositiveEnergy(self.index, f"mode {self.index}: energy must be > 0")


@dataclass(frozen=True)
class ModeGrid:
    modes: tuple[Mode, ...]

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if not self.modes:
            raise EmptyGrid("a mode grid needs at least one mode")
        prev = None
        for m in self.modes:
            if prev is not None and m.index <= prev:
                raise NonIncreasingIndex(m.index, "mode indices must be strictly increasing")
            prev = m.index

    def __len__(self):
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    def __getitem__(self, i):
        return self.modes[i]

    @property
    def omegas(self) -> np.ndarray:
        return np.array([m.omega for m in self.modes])

    @property
    def gammas(self) -> np.ndarray:
        return np.array([m.gamma for m in self.modes])

    @property
    def energies(self) -> np.ndarray:
        return np.array([m.energy for m in self.modes])

    @property
    def total_gamma(self) -> float:
        return math.fsum(m.gamma for m in self.modes)


@dataclass(frozen=True)
class MemoryCode:
    """The theta-set labelling one vacuum representation.

    ``thetas`` may be negative; every formula downstream handles arbitrary
    real angles.
    """

    grid: ModeGrid
    thetas: tuple[float, ...]

    def __post_init__(self):
        thetas = tuple(float(x) for x in self.thetas)
        if len(thetas) != len(self.grid):
            raise LengthMismatch(
                f"code has {len(thetas)} angles but the grid has {len(self.grid)} modes"
            )
        for i, th in enumerate(thetas):
            if not math.isfinite(th):
                raise NonFinite(i, f"theta[{i}] is not finite")
        object.__setattr__(self, "thetas", thetas)

    def __len__(self):
        return len(self.thetas)

    @property
    def theta_array(self) -> np.ndarray:
        return np.array(self.thetas)

    def occupations(self) -> np.ndarray:
        """Condensate densities ``sinh(theta)**2`` at t = 0."""
        return np.sinh(self.theta_array) ** 2

    def at(self, t: float) -> "EvolvedState":
        return EvolvedState(self, t)


@dataclass(frozen=True)
class EvolvedState:
    """A memory code evolved to time ``t``; per mode it is a two-mode
    squeezed vacuum with parameter ``r = gamma * t - theta``."""

    code: MemoryCode
    time: float

    def __post_init__(self):
        object.__setattr__(self, "time", check_time(self.time, "time"))
        r = self.squeeze_parameters()
        if not np.all(np.isfinite(r)):
            bad = int(np.flatnonzero(~np.isfinite(r))[0])
            raise NonFinite(bad, f"squeeze parameter of mode {bad} is not finite")

    @property
    def grid(self) -> ModeGrid:
        return self.code.grid

    def squeeze_parameters(self) -> np.ndarray:
        return self.code.grid.gammas * self.time - self.code.theta_array


def build_grid(specs: Iterable[Sequence[float]], indices: Sequence[int] | None = None) -> ModeGrid:
    """Build a validated grid from ``(omega, gamma[, energy])`` tuples.

    Mappings with keys ``omega``, ``gamma`` and optional ``energy`` are also
    accepted. Missing energies default to ``omega``; when ``indices`` is not
    given, modes are labelled 0, 1, 2, ... in input order.

    >>> build_grid([(1.0, 0.5), (2.0, 0.25)]).total_gamma
    0.75
    """
    specs = list(specs)
    if not specs:
        raise EmptyGrid("a mode grid needs at least one mode")
    if indices is None:
        indices = range(len(specs))
    elif len(indices) != len(specs):
        raise LengthMismatch("indices and specs differ in length")
    modes = []
    for idx, spec in zip(indices, specs):
        if isinstance(spec, dict):
            omega = spec.get("omega")
            gamma = spec.get("gamma")
            energy = spec.get("energy")
        else:
            if len(spec) not in (2, 3):
                raise LengthMismatch(f"mode spec {idx} must have 2 or 3 entries")
            omega, gamma = spec[0], spec[1]
            energy = spec[2] if len(spec) == 3 else None
        try:
            omega = float(omega)
            gamma = float(gamma)
            energy = omega if energy is None else float(energy)
        except (TypeError, ValueError):
            raise NonFinite(int(idx), f"mode {idx}: non-numeric entry") from None
        modes.append(Mode(int(idx), omega, gamma, energy))
    return ModeGrid(tuple(modes))


def code_from_occupations(grid: ModeGrid, ns: Sequence[float]) -> MemoryCode:
    """Invert ``N = sinh(theta)**2`` for each mode, taking ``theta >= 0``."""
    ns = [float(n) for n in ns]
    if len(ns) != len(grid):
        raise LengthMismatch(f"{len(ns)} occupations for a {len(grid)}-mode grid")
    for i, n in enumerate(ns):
        if not math.isfinite(n):
            raise NonFinite(i, f"occupation {i} is not finite")
        if n < 0:
            raise NegativeOccupation(i, f"occupation {i} is negative ({n})")
    return MemoryCode(grid, tuple(math.asinh(math.sqrt(n)) for n in ns))


@dataclass(frozen=True)
class CodeDistance:
    delta_n: np.ndarray
    max_abs: float


def code_distance_at_zero(a: MemoryCode, b: MemoryCode) -> CodeDistance:
    """Per-mode ``N_b - N_a`` at t = 0 and its max-absolute aggregate."""
    check_same_grid(a, b)
    delta = b.occupations() - a.occupations()
    return CodeDistance(delta, float(np.max(np.abs(delta))))
