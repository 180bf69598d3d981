"""Input validation helpers shared by the public functions and estimators."""

import math

import numpy as np

from .exceptions import (
    GridMismatch,
    IndexOutOfRange,
    NegativeTime,
    UnorderedTimes,
)


def check_finite_scalar(value, name="value"):
    try:
        x = float(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be a real number, got {value!r}") from exc
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x}")
    return x


def check_time(t, name="t"):
    t = check_finite_scalar(t, name)
    if t < 0:
        raise NegativeTime(f"{name} must be >= 0, got {t}")
    return t


def check_times(times, *, strict=True, allow_negative=False):
    """Return ``times`` as a finite 1-D float array, increasing.

    Raises UnorderedTimes when the sequence is not (strictly) increasing.
    """
    arr = np.asarray(times, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError("times must be finite")
    if not allow_negative and np.any(arr < 0):
        raise NegativeTime("times must be >= 0")
    d = np.diff(arr)
    if (strict and np.any(d <= 0)) or np.any(d < 0):
        raise UnorderedTimes("times must be strictly increasing")
    return arr


def check_mode_index(grid, index):
    n = len(grid)
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
        raise IndexOutOfRange(f"mode index must be an integer, got {index!r}")
    if not 0 <= index < n:
        raise IndexOutOfRange(f"mode index {index} outside 0..{n - 1}")
    return int(index)


def check_same_grid(a, b):
    """Raise GridMismatch unless two codes/states live on the same grid."""
    ga = getattr(a, "grid", a)
    gb = getattr(b, "grid", b)
    if ga is not gb and ga != gb:
        raise GridMismatch("operands are defined on different mode grids")
    return ga
