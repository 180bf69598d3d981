"""Dissipative quantum memory model.

Memory states are products of two-mode squeezed vacua, one per field mode,
with squeeze parameter ``r = gamma * t - theta``.  The package evaluates
them in closed form (:mod:`.analytics`), checks every closed form against a
truncated Fock-space oracle (:mod:`.fock`), studies trajectories in memory
space (:mod:`.chaos`), integrates the classical doubled oscillator
(:mod:`.oscillator`) and exposes scikit-learn style estimators
(:mod:`.estimators`).
"""

from . import analytics, chaos, fock, oscillator
from .estimators import LyapunovEstimator, MemoryTrajectory
from .exceptions import MemoryModelError
from .modes import (
    EvolvedState,
    MemoryCode,
    Mode,
    ModeGrid,
    build_grid,
    code_distance_at_zero,
    code_from_occupations,
)

__version__ = "0.1.0"

__all__ = [
    "analytics",
    "chaos",
    "fock",
    "oscillator",
    "LyapunovEstimator",
    "MemoryTrajectory",
    "MemoryModelError",
    "EvolvedState",
    "MemoryCode",
    "Mode",
    "ModeGrid",
    "build_grid",
    "code_distance_at_zero",
    "code_from_occupations",
]
