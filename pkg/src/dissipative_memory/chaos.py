"""Trajectories in memory space: divergence, Lyapunov rates, lifetimes,
crossings, associations and the entropy-divergence balance.

Conventions: for codes ``a`` (angles theta) and ``b`` (angles theta'),
``delta_theta = theta - theta'`` and ``delta_n = N_b(t) - N_a(t)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import analytics
from ._validation import check_mode_index, check_same_grid, check_time, check_times
from .estimators import LyapunovEstimator
from .exceptions import BadThreshold, ZeroSqueeze
from .modes import MemoryCode

__all__ = [
    "DivergenceSeries",
    "DivergenceRate",
    "LyapunovFit",
    "LifetimeReport",
    "Crossing",
    "AssociationEvent",
    "EntropyDivergence",
    "divergence_series",
    "divergence_rate",
    "lyapunov_estimate",
    "asymptotic_window",
    "lifetimes",
    "crossing_times",
    "association_events",
    "entropy_divergence_check",
    "self_overlap_profile",
    "refresh",
]


@dataclass(frozen=True)
class DivergenceSeries:
    mode: int
    gamma: float
    theta: float
    delta_theta: float
    times: np.ndarray
    delta_n: np.ndarray
    linearized: np.ndarray


def divergence_series(a: MemoryCode, b: MemoryCode, times) -> list[DivergenceSeries]:
    """Exact per-mode ``delta_n(t)`` with the first-order form alongside.

    The companion column is ``sinh(2(gamma t - theta)) * delta_theta``.
    """
    check_same_grid(a, b)
    times = check_times(times)
    out = []
    for k, mode in enumerate(a.grid):
        th, thp = a.thetas[k], b.thetas[k]
        x = mode.gamma * times - th
        xp = mode.gamma * times - thp
        exact = np.sinh(xp) ** 2 - np.sinh(x) ** 2
        if not np.all(np.isfinite(exact)):
            raise ValueError(f"mode {k}: divergence overflows inside the time grid")
        lin = np.sinh(2.0 * x) * (th - thp)
        out.append(DivergenceSeries(k, mode.gamma, th, th - thp, times, exact, lin))
    return out


@dataclass(frozen=True)
class DivergenceRate:
    linearized: float
    exact: float


def divergence_rate(a: MemoryCode, b: MemoryCode, t: float, index: int) -> DivergenceRate:
    """Time derivative of ``delta_n`` for one mode, first-order and exact."""
    check_same_grid(a, b)
    k = check_mode_index(a.grid, index)
    t = check_time(t)
    g = a.grid[k].gamma
    th, thp = a.thetas[k], b.thetas[k]
    lin = 2.0 * g * math.cosh(2.0 * (g * t - th)) * (th - thp)
    exact = g * (math.sinh(2.0 * (g * t - thp)) - math.sinh(2.0 * (g * t - th)))
    return DivergenceRate(lin, exact)


@dataclass(frozen=True)
class LyapunovFit:
    mode: int
    exponent: float
    reference: float
    window: tuple
    residual: float
    n_samples: int

    @property
    def relative_error(self) -> float:
        return abs(self.exponent - self.reference) / self.reference


def asymptotic_window(a: MemoryCode, b: MemoryCode, index: int, lo=2.0, hi=10.0):
    """Times where ``gamma t - max(theta, theta')`` lies in ``[lo, hi]``."""
    k = check_mode_index(a.grid, index)
    g = a.grid[k].gamma
    th = max(a.thetas[k], b.thetas[k])
    return ((th + lo) / g, (th + hi) / g)


def lyapunov_estimate(series: DivergenceSeries, window=None, min_samples=8) -> LyapunovFit:
    """Fit the divergence rate of ``ln|delta_n|`` over ``window``.

    Raises WindowContainsZeroCrossing when ``delta_n`` vanishes or changes
    sign in the window and InsufficientSamples below ``min_samples``.
    """
    est = LyapunovEstimator(window=window, min_samples=min_samples)
    est.fit(series.times, series.delta_n)
    return LyapunovFit(
        mode=series.mode,
        exponent=est.exponent_,
        reference=2.0 * series.gamma,
        window=est.window_,
        residual=est.residual_,
        n_samples=est.n_samples_fit_,
    )


@dataclass(frozen=True)
class LifetimeReport:
    per_mode: np.ndarray
    tau: float
    tau_min: float
    recognition_window: float
    negative_modes: tuple

    @property
    def flagged(self) -> bool:
        return bool(self.negative_modes)


def lifetimes(code: MemoryCode) -> LifetimeReport:
    """Per-mode forgetting times ``theta / gamma``.

    Negative angles give negative times; they are reported and listed in
    ``negative_modes`` rather than rejected.
    """
    t = code.theta_array / code.grid.gammas
    neg = tuple(int(i) for i in np.flatnonzero(code.theta_array < 0))
    tau, tau_min = float(t.max()), float(t.min())
    return LifetimeReport(t, tau, tau_min, tau - tau_min, neg)


@dataclass(frozen=True)
class Crossing:
    mode: int
    exact: float
    approx: float


def crossing_times(a: MemoryCode, b: MemoryCode) -> list[Crossing]:
    """Per-mode time where ``delta_n`` vanishes.

    ``exact`` is ``(theta + theta') / (2 gamma)`` where the two squeeze
    parameters are opposite; ``approx`` is the first-order ``theta / gamma``.
    For identical angles every time is a crossing and ``exact`` equals
    ``theta / gamma``.
    """
    check_same_grid(a, b)
    out = []
    for k, mode in enumerate(a.grid):
        th, thp = a.thetas[k], b.thetas[k]
        out.append(Crossing(k, (th + thp) / (2.0 * mode.gamma), th / mode.gamma))
    return out


@dataclass(frozen=True)
class AssociationEvent:
    pair: tuple
    time: float
    overlap: float


def _pair_events(codes, i, j, times, threshold):
    events = []
    for t in times:
        ov = analytics.overlap(codes[i].at(float(t)), codes[j].at(float(t)))
        if abs(ov) >= threshold:
            events.append(AssociationEvent((i, j), float(t), ov))
    return events


def association_events(codes, times, threshold, executor=None) -> list[AssociationEvent]:
    """Equal-time pairs whose overlap reaches ``threshold``.

    Sorted by descending overlap, ties broken by pair then time.  An
    optional ``concurrent.futures`` executor spreads the pairs; results are
    assembled in pair order so the output does not depend on it.
    """
    threshold = float(threshold)
    if not 0.0 < threshold < 1.0:
        raise BadThreshold(f"threshold must lie in (0, 1), got {threshold}")
    codes = list(codes)
    for c in codes[1:]:
        check_same_grid(codes[0], c)
    times = check_times(times, strict=False)
    pairs = list(itertools.combinations(range(len(codes)), 2))
    if executor is None:
        chunks = [_pair_events(codes, i, j, times, threshold) for i, j in pairs]
    else:
        chunks = list(
            executor.map(lambda p: _pair_events(codes, p[0], p[1], times, threshold), pairs)
        )
    events = [e for chunk in chunks for e in chunk]
    events.sort(key=lambda e: (-e.overlap, e.pair, e.time))
    return events


@dataclass(frozen=True)
class EntropyDivergence:
    lhs: float
    rhs: float
    gap: float


def _quasi_beta(state, k):
    return analytics.thermal_diagnostics(state, k).beta


def entropy_divergence_check(a: MemoryCode, b: MemoryCode, t: float, dt: float,
                             beta=None, linearize_at="midpoint") -> EntropyDivergence:
    """Compare the energy-weighted divergence rate with the entropy change.

    ``lhs = sum_k 2 E_k gamma_k cosh(2(gamma_k t - theta_k)) delta_theta_k dt``;
    ``rhs = sum_k (dS'_k / beta'_k - dS_k / beta_k)`` with each entropy
    change taken as a central difference over ``[t - dt/2, t + dt/2]``.

    ``beta=None`` uses each trajectory's own per-mode quasi-equilibrium
    inverse temperature (``tanh^2 r = exp(-beta E)``) at time ``t``;
    a scalar uses that fixed value everywhere, as a diagnostic.

    ``linearize_at`` picks the expansion angle in the first-order rate:
    ``"midpoint"`` uses ``(theta + theta') / 2`` (error second order in
    delta_theta), ``"reference"`` uses theta of ``a`` (first order).
    """
    check_same_grid(a, b)
    t = check_time(t)
    if dt <= 0 or t - dt / 2 < 0:
        raise ValueError("need dt > 0 and t >= dt / 2")
    if linearize_at not in ("midpoint", "reference"):
        raise ValueError("linearize_at must be 'midpoint' or 'reference'")
    th = a.theta_array
    thp = b.theta_array
    g = a.grid.gammas
    e = a.grid.energies
    anchor = 0.5 * (th + thp) if linearize_at == "midpoint" else th
    lhs_terms = 2.0 * e * g * np.cosh(2.0 * (g * t - anchor)) * (th - thp) * dt
    lhs = math.fsum(lhs_terms.tolist())

    def entropy_step(code):
        lo = analytics.mode_entropies(code.at(t - dt / 2))
        hi = analytics.mode_entropies(code.at(t + dt / 2))
        return hi - lo

    ds_a = entropy_step(a)
    ds_b = entropy_step(b)
    if beta is None:
        sa, sb = a.at(t), b.at(t)
        for k in range(len(a)):
            for s in (sa, sb):
                if analytics.squeeze_parameter(s, k) == 0.0:
                    raise ZeroSqueeze(f"mode {k}: r = 0 at t = {t}")
        beta_a = np.array([_quasi_beta(sa, k) for k in range(len(a))])
        beta_b = np.array([_quasi_beta(sb, k) for k in range(len(b))])
    else:
        beta_a = beta_b = np.full(len(a), float(beta))
    rhs = math.fsum((ds_b / beta_b - ds_a / beta_a).tolist())
    scale = max(abs(lhs), abs(rhs))
    gap = 0.0 if scale == 0.0 else abs(lhs - rhs) / scale
    return EntropyDivergence(lhs, rhs, gap)


def self_overlap_profile(code: MemoryCode, t: float, lags) -> np.ndarray:
    """Overlap of the state at ``t`` with itself at ``t + lag`` for each lag."""
    base = code.at(check_time(t))
    return np.array([analytics.overlap(base, code.at(t + float(d))) for d in lags])


def refresh(code: MemoryCode, thetas=None) -> MemoryCode:
    """Restart the memory clock, optionally with updated angles.

    Returns the code to be evaluated from t = 0 again; no dynamics of the
    refresh itself are modelled.
    """
    if thetas is None:
        return code
    return MemoryCode(code.grid, tuple(thetas))

