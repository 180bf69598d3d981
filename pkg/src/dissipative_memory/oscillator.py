"""Classical doubled damped oscillator.

The x coordinate obeys ``m x'' + gamma x' + k x = 0`` and its mirror y obeys
``m y'' - gamma y' + k y = 0``.  ``h = m x' y' + k x y`` is conserved, and
the constraint surface ``y = y' = 0`` is invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import IntegrationBlowUp, Overdamped, ValidationError

__all__ = [
    "OscParams",
    "OscState",
    "OscillatorTrajectory",
    "integrate",
    "analytic_x",
    "conserved_h",
    "envelope",
    "envelope_rate",
]


@dataclass(frozen=True)
class OscParams:
    m: float = 1.0
    gamma_c: float = 0.0
    k: float = 1.0

    def __post_init__(self):
        for name in ("m", "gamma_c", "k"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite")
        if self.m <= 0:
            raise ValidationError("m must be > 0")
        if self.k <= 0:
            raise ValidationError("k must be > 0")
        if self.gamma_c < 0:
            raise ValidationError("gamma_c must be >= 0")

    @property
    def underdamped(self) -> bool:
        return self.gamma_c**2 < 4.0 * self.m * self.k

    @property
    def decay_rate(self) -> float:
        return self.gamma_c / (2.0 * self.m)

    @property
    def damped_frequency(self) -> float:
        if not self.underdamped:
            raise Overdamped("no oscillation frequency outside the underdamped regime")
        return math.sqrt(self.k / self.m - self.decay_rate**2)


@dataclass(frozen=True)
class OscState:
    x: float
    v_x: float
    y: float
    v_y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.v_x, self.y, self.v_y], dtype=float)


@dataclass(frozen=True)
class OscillatorTrajectory:
    params: OscParams
    times: np.ndarray
    states: np.ndarray  # columns x, v_x, y, v_y
    h: np.ndarray

    @property
    def x(self):
        return self.states[:, 0]

    @property
    def v_x(self):
        return self.states[:, 1]

    @property
    def y(self):
        return self.states[:, 2]

    @property
    def v_y(self):
        return self.states[:, 3]

    def h_drift(self) -> float:
        """Max relative drift of h; absolute when ``h(0) = 0``."""
        d = np.max(np.abs(self.h - self.h[0]))
        return float(d / abs(self.h[0])) if self.h[0] != 0 else float(d)


def conserved_h(state, params: OscParams) -> float:
    s = state.as_array() if isinstance(state, OscState) else np.asarray(state, dtype=float)
    x, vx, y, vy = s[..., 0], s[..., 1], s[..., 2], s[..., 3]
    return params.m * vx * vy + params.k * x * y


def _generator(m, g, k):
    # d/dt (x, v_x, y, v_y) = A (x, v_x, y, v_y)
    return np.array([
        [0.0, 1.0, 0.0, 0.0],
        [-k / m, -g / m, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -k / m, g / m],
    ])


def _rk4_step_matrix(a, dt):
    # for a linear system one classical RK4 step is the degree-4 Taylor
    # polynomial of exp(dt A)
    z = dt * a
    z2 = z @ z
    z3 = z2 @ z
    return np.eye(4) + z + z2 / 2.0 + z3 / 6.0 + (z3 @ z) / 24.0


def integrate(params: OscParams, initial: OscState, t_end: float, dt: float) -> OscillatorTrajectory:
    """Classical fourth-order Runge-Kutta with a fixed step.

    The equations are linear, so each step applies the precomputed RK4
    propagator ``I + Z + Z^2/2 + Z^3/6 + Z^4/24`` with ``Z = dt A``.

    The sample count is ``round(t_end / dt)``; the last sample may differ
    from ``t_end`` by rounding.  Raises IntegrationBlowUp at the first
    non-finite sample.
    """
    if not (dt > 0 and math.isfinite(dt)):
        raise ValidationError("dt must be a positive finite number")
    if not (t_end >= dt and math.isfinite(t_end)):
        raise ValidationError("t_end must be finite and >= dt")
    n = int(round(t_end / dt))
    step = _rk4_step_matrix(_generator(params.m, params.gamma_c, params.k), dt)
    states = np.empty((n + 1, 4))
    s = initial.as_array()
    if not np.all(np.isfinite(s)):
        raise ValidationError("initial state must be finite")
    states[0] = s
    # overflow is detected below and raised as IntegrationBlowUp
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n):
            s = step @ s
            if not np.all(np.isfinite(s)):
                raise IntegrationBlowUp(f"trajectory overflowed at t = {(i + 1) * dt}",
                                        time=(i + 1) * dt)
            states[i + 1] = s
    times = np.arange(n + 1) * dt
    h = conserved_h(states, params)
    return OscillatorTrajectory(params, times, states, h)


def analytic_x(params: OscParams, x0: float, v0: float, t):
    """Closed-form underdamped solution of the damped equation."""
    if not params.underdamped:
        raise Overdamped("the closed-form reference covers the underdamped regime only")
    a = params.decay_rate
    w = params.damped_frequency
    t = np.asarray(t, dtype=float)
    x = np.exp(-a * t) * (x0 * np.cos(w * t) + (v0 + a * x0) / w * np.sin(w * t))
    return float(x) if x.ndim == 0 else x


def envelope(traj: OscillatorTrajectory, coordinate="x") -> np.ndarray:
    """Phase-space amplitude of one coordinate.

    For the damped x coordinate this is ``sqrt(x^2 + ((v + a x)/w)^2)``,
    which equals the exact amplitude ``C exp(-a t)`` of the underdamped
    solution; the mirror uses ``-a``.
    """
    p = traj.params
    a = p.decay_rate
    w = p.damped_frequency
    if coordinate == "x":
        q, v = traj.x, traj.v_x
    elif coordinate == "y":
        q, v, a = traj.y, traj.v_y, -a
    else:
        raise ValueError("coordinate must be 'x' or 'y'")
    return np.sqrt(q**2 + ((v + a * q) / w) ** 2)


def envelope_rate(traj: OscillatorTrajectory, coordinate="x") -> float:
    """Log-linear regression slope of :func:`envelope` against time."""
    env = envelope(traj, coordinate)
    mask = env > 0
    if mask.sum() < 2:
        raise ValidationError(f"{coordinate} envelope vanishes; no rate to fit")
    slope, _ = np.polyfit(traj.times[mask], np.log(env[mask]), 1)
    return float(slope)
