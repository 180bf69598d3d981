"""Closed-form memory-state quantities.

Per mode the evolved memory state is a real two-mode squeezed vacuum with
pair amplitudes ``tanh(r)**n / cosh(r)`` and ``r = gamma * t - theta``.
All multimode quantities are products (overlaps) or sums (entropy) of
per-mode terms, reduced left to right in mode order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_mode_index, check_same_grid, check_time
from .exceptions import NegativeTruncation, ZeroSqueeze
from .modes import EvolvedState, MemoryCode, Mode

__all__ = [
    "SchmidtWeights",
    "ThermalDiagnostics",
    "squeeze_parameter",
    "occupation",
    "occupations",
    "pair_creation",
    "overlap",
    "log_overlap",
    "decay_envelope",
    "attractor_ratio",
    "attractor_limit",
    "schmidt_weights",
    "mode_entropy",
    "mode_entropies",
    "entanglement_entropy",
    "entropy_of_occupation",
    "entropy_slope",
    "thermal_diagnostics",
]


def squeeze_parameter(state: EvolvedState, index: int) -> float:
    i = check_mode_index(state.grid, index)
    return float(state.grid[i].gamma * state.time - state.code.thetas[i])


def occupation(state: EvolvedState, index: int) -> float:
    """Mean number of quanta in mode ``index`` (equal for the mirror mode)."""
    return math.sinh(squeeze_parameter(state, index)) ** 2


def occupations(state: EvolvedState) -> np.ndarray:
    return np.sinh(state.squeeze_parameters()) ** 2


def pair_creation(state: EvolvedState, index: int) -> float:
    """Pair-creation expectation ``<A^dag Atilde^dag> = sinh(r) cosh(r)``."""
    r = squeeze_parameter(state, index)
    return math.sinh(r) * math.cosh(r)


def _log_cosh(x):
    # log(cosh x) without overflow for large |x|
    x = np.abs(np.asarray(x, dtype=float))
    return x + np.log1p(np.exp(-2.0 * x)) - math.log(2.0)


def log_overlap(a: EvolvedState, b: EvolvedState) -> float:
    """Natural log of the overlap, summed per mode in index order."""
    check_same_grid(a, b)
    dr = a.squeeze_parameters() - b.squeeze_parameters()
    terms = _log_cosh(dr)
    return -math.fsum(terms.tolist())


def overlap(a: EvolvedState, b: EvolvedState) -> float:
    """Inner product of two evolved memory states, ``prod 1/cosh(r_a - r_b)``.

    Evaluated in log space so that large mode counts underflow gracefully.
    """
    if a is b:
        return 1.0
    return math.exp(log_overlap(a, b))


def decay_envelope(code: MemoryCode, t: float) -> float:
    """``exp(-t * sum(gamma))``, the asymptotic law of the overlap with t = 0."""
    t = check_time(t)
    return math.exp(-t * code.grid.total_gamma)


def attractor_ratio(code: MemoryCode, t: float) -> float:
    """Overlap with the empty vacuum times ``exp(t * sum(gamma))``.

    Converges to :func:`attractor_limit` as t grows; for the empty code that
    limit is ``2**M``.
    """
    t = check_time(t)
    r = code.grid.gammas * t - code.theta_array
    log_ov = -math.fsum(_log_cosh(r).tolist())
    return math.exp(log_ov + t * code.grid.total_gamma)


def attractor_limit(code: MemoryCode) -> float:
    """Limit of :func:`attractor_ratio`: ``prod_k 2 exp(theta_k)``."""
    return math.exp(len(code) * math.log(2.0) + math.fsum(code.thetas))


@dataclass(frozen=True)
class SchmidtWeights:
    mode: Mode
    n_max: int
    weights: np.ndarray
    tail: float


def _log_tanh2(r):
    # ln tanh^2 r, accurate for large |r| where tanh^2 r -> 1
    a = abs(r)
    if a < 0.5:
        return 2.0 * math.log(math.tanh(a))
    return 2.0 * math.log1p(-2.0 / (math.exp(2.0 * a) + 1.0))


def schmidt_weights(state: EvolvedState, index: int, n_max: int) -> SchmidtWeights:
    """Pair-component probabilities ``W_n = tanh(r)**(2n) / cosh(r)**2``.

    ``tail`` is the closed-form mass beyond ``n_max``, ``tanh(r)**(2(n_max+1))``.
    """
    if n_max < 0:
        raise NegativeTruncation(f"n_max must be >= 0, got {n_max}")
    i = check_mode_index(state.grid, index)
    r = squeeze_parameter(state, i)
    n = np.arange(n_max + 1)
    if r == 0.0:
        weights = (n == 0).astype(float)
        tail = 0.0
    else:
        lt2 = _log_tanh2(r)
        weights = np.exp(n * lt2) * -math.expm1(lt2)
        tail = math.exp((n_max + 1) * lt2)
    return SchmidtWeights(state.grid[i], int(n_max), weights, tail)


def entropy_of_occupation(n):
    """Entropy ``(1+N) ln(1+N) - N ln N`` of a mode with mean occupation N."""
    n = np.asarray(n, dtype=float)
    # rewritten as ln(1+N) + N ln(1 + 1/N) to avoid cancellation at large N;
    # below N = 1 the second term is N (ln(1+N) - ln N), which cannot overflow
    safe = np.where(n > 0, n, 1.0)
    small = safe * (np.log1p(safe) - np.log(safe))
    large = safe * np.log1p(1.0 / np.maximum(safe, 1.0))
    return np.log1p(n) + np.where(n > 0, np.where(n < 1.0, small, large), 0.0)


def mode_entropy(r: float) -> float:
    """``cosh^2 r ln cosh^2 r - sinh^2 r ln sinh^2 r`` for one mode."""
    return float(entropy_of_occupation(math.sinh(r) ** 2))


def mode_entropies(state: EvolvedState) -> np.ndarray:
    return entropy_of_occupation(occupations(state))


def entanglement_entropy(state: EvolvedState) -> float:
    """Von Neumann entanglement entropy between the system and mirror modes.

    Equals ``-sum W_n ln W_n`` over the joint pair distribution; additive
    over modes and zero only for the empty vacuum.
    """
    return math.fsum(mode_entropies(state).tolist())


def entropy_slope(n: float) -> float:
    """Analytic ``dS/dN = ln((1 + N) / N)`` for one mode."""
    if n <= 0:
        raise ZeroSqueeze("dS/dN diverges at N = 0")
    return math.log1p(1.0 / n)


@dataclass(frozen=True)
class ThermalDiagnostics:
    """Quasi-equilibrium reading of one mode.

    ``beta`` solves ``tanh(r)**2 = exp(-beta * E)``. ``ntt_lhs`` and
    ``ntt_rhs`` are the mean occupation and the Boltzmann-weighted pair
    creation amplitude; they are reported side by side, not asserted equal.
    """

    mode: Mode
    r: float
    beta: float
    bose_occupation: float
    boltzmann_factor: float
    ntt_lhs: float
    ntt_rhs: float


def thermal_diagnostics(state: EvolvedState, index: int) -> ThermalDiagnostics:
    i = check_mode_index(state.grid, index)
    r = squeeze_parameter(state, i)
    if r == 0.0:
        raise ZeroSqueeze(f"mode {i}: beta is undefined at r = 0")
    mode = state.grid[i]
    n = math.sinh(r) ** 2
    beta_e = math.log1p(1.0 / n)  # = -ln tanh^2 r
    beta = beta_e / mode.energy
    boltzmann = math.exp(-beta_e)
    bose = 1.0 / math.expm1(beta_e)
    return ThermalDiagnostics(
        mode=mode,
        r=r,
        beta=beta,
        bose_occupation=bose,
        boltzmann_factor=boltzmann,
        ntt_lhs=n,
        ntt_rhs=boltzmann * math.sinh(r) * math.cosh(r),
    )
