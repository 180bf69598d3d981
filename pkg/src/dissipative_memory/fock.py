"""Truncated Fock-space oracle.

Brute-force counterpart of :mod:`dissipative_memory.analytics`.  States are
built by exponentiating the pair generator and the Hamiltonian as matrices
in a truncated number basis, never by the closed-form amplitudes.  Because
both the Hamiltonian and the squeezing generator are sums of commuting
per-mode terms, the oracle works on one mode pair at a time.

Two spaces are used:

* the pair sector ``|n, n~>``, n = 0..n_max, reachable from the vacuum;
* the full grid ``|n, m~>``, n, m = 0..n_max, used only for the charge probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .exceptions import (
    NegativeTruncation,
    NonFiniteAmplitude,
    TruncationTooSmall,
    UnknownObservable,
    ValidationError,
)

__all__ = [
    "PairSectorState",
    "FullGridState",
    "OBSERVABLES",
    "tail_mass",
    "n_max_for",
    "pair_generator",
    "vacuum",
    "build_squeezed",
    "apply_generator",
    "evolve",
    "expectation",
    "fidelity",
    "inner",
    "oracle_entropy",
    "basis_state",
    "charge_conservation_probe",
    "ChargeProbeResult",
]

OBSERVABLES = ("N_A", "N_Atilde", "A+Atilde+", "AAtilde")
_OBSERVABLE_ALIASES = {
    "N_A": "N_A",
    "N_Atilde": "N_Atilde",
    "A+Atilde+": "A+Atilde+",
    "A†Ã†": "A+Atilde+",
    "AdagAtildedag": "A+Atilde+",
    "AAtilde": "AAtilde",
    "AÃ": "AAtilde",
}


def tail_mass(r: float, n_max: int) -> float:
    """Probability beyond ``n_max`` in a squeezed pair state, ``tanh(r)**(2(n_max+1))``."""
    return math.tanh(r) ** (2 * (n_max + 1))


def n_max_for(r: float, tol: float, cap: int | None = None) -> int:
    """Smallest truncation whose tail mass is below ``tol``.

    Raises TruncationTooSmall when that exceeds ``cap``.
    """
    if not 0 < tol < 1:
        raise ValidationError(f"tolerance must lie in (0, 1), got {tol}")
    t2 = math.tanh(r) ** 2
    if t2 == 0.0:
        n = 0
    elif t2 >= 1.0:
        n = math.inf
    else:
        n = max(0, math.ceil(math.log(tol) / math.log(t2)) - 1)
        while t2 ** (n + 1) >= tol:
            n += 1
    if cap is not None and n > cap:
        leak = tail_mass(r, cap)
        raise TruncationTooSmall(
            f"r={r}: tail mass {leak:.3g} at n_max={cap} exceeds tolerance {tol:g}",
            leakage=leak,
            n_max=cap,
        )
    if n == math.inf:
        raise TruncationTooSmall(f"r={r}: squeezing too large to truncate", n_max=cap)
    return int(n)


def _equivalent_tail(amps: np.ndarray) -> float:
    # tail mass of the squeezed pair state with the same mean occupation
    p = amps**2
    total = p.sum()
    if total == 0.0:
        return math.inf
    n_mean = float(np.dot(np.arange(p.size), p) / total)
    r = math.asinh(math.sqrt(n_mean))
    return tail_mass(r, p.size - 1)


@dataclass(frozen=True)
class PairSectorState:
    """Real amplitudes over ``|n, n~>``.

    ``leakage`` is the probability estimated to lie beyond the truncation.
    When not supplied it is the closed-form tail of the squeezed pair state
    with the same mean occupation, which is exact for squeezed states and
    insensitive to the boundary distortion of truncated propagation.
    """

    amps: np.ndarray
    leakage: float = field(default=None)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=float).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        if not np.all(np.isfinite(amps)):
            raise NonFiniteAmplitude("pair-sector amplitudes contain non-finite values")
        if self.leakage is None:
            object.__setattr__(self, "leakage", _equivalent_tail(amps))

    @property
    def n_max(self) -> int:
        return self.amps.size - 1

    @property
    def norm2(self) -> float:
        return math.fsum((self.amps**2).tolist())

    def probabilities(self) -> np.ndarray:
        return self.amps**2


@dataclass(frozen=True)
class FullGridState:
    """Amplitudes ``c[n, m]`` over ``|n, m~>``."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1]:
            raise ValidationError("full-grid amplitudes must be a square matrix")
        if not np.all(np.isfinite(amps)):
            raise NonFiniteAmplitude("full-grid amplitudes contain non-finite values")
        object.__setattr__(self, "amps", amps)

    @property
    def n_max(self) -> int:
        return self.amps.shape[0] - 1

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


def basis_state(n: int, m: int, n_max: int) -> FullGridState:
    if not (0 <= n <= n_max and 0 <= m <= n_max):
        raise ValidationError(f"|{n},{m}~> is outside the truncation n_max={n_max}")
    c = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    c[n, m] = 1.0
    return FullGridState(c)


def _check_n_max(n_max):
    if n_max < 0:
        raise NegativeTruncation(f"n_max must be >= 0, got {n_max}")
    return int(n_max)


def pair_generator(n_max: int) -> np.ndarray:
    """Matrix of ``K = A^dag Atilde^dag - A Atilde`` on the pair sector.

    ``A^dag Atilde^dag |n,n~> = (n+1) |n+1,n+1~>`` and
    ``A Atilde |n,n~> = n |n-1,n-1~>``, so K is real antisymmetric
    tridiagonal.
    """
    n_max = _check_n_max(n_max)
    k = np.zeros((n_max + 1, n_max + 1))
    n = np.arange(n_max)
    k[n + 1, n] = n + 1.0
    k[n, n + 1] = -(n + 1.0)
    return k


def vacuum(n_max: int) -> PairSectorState:
    c = np.zeros(_check_n_max(n_max) + 1)
    c[0] = 1.0
    return PairSectorState(c, leakage=0.0)


def build_squeezed(r: float, n_max: int) -> PairSectorState:
    """Reference pair state ``c_n = tanh(r)**n / cosh(r)``, exact leakage."""
    n_max = _check_n_max(n_max)
    n = np.arange(n_max + 1)
    c = np.tanh(r) ** n / math.cosh(r)
    return PairSectorState(c, leakage=tail_mass(r, n_max))


def apply_generator(theta: float, n_max: int, tol: float = 1e-6,
                    state: PairSectorState | None = None) -> PairSectorState:
    """Apply ``exp(-i G(theta))`` to the pair vacuum (or ``state``).

    In the pair sector ``-i G(theta) = -theta K`` with ``K`` from
    :func:`pair_generator`; the exponential is taken numerically.
    """
    n_max = _check_n_max(n_max)
    if state is None:
        leak = tail_mass(theta, n_max)
        if leak > tol:
            raise TruncationTooSmall(
                f"theta={theta}: tail mass {leak:.3g} at n_max={n_max} exceeds {tol:g}",
                leakage=leak,
                n_max=n_max,
            )
        state = vacuum(n_max)
    elif state.n_max != n_max:
        raise ValidationError("state truncation differs from n_max")
    k = sp.csr_matrix(pair_generator(n_max))
    out = PairSectorState(expm_multiply(-theta * k, state.amps))
    if out.leakage > tol:
        raise TruncationTooSmall(
            f"leakage {out.leakage:.3g} exceeds {tol:g}", leakage=out.leakage, n_max=n_max
        )
    return out


def evolve(state: PairSectorState, omega: float, gamma: float, dt: float, steps: int,
           tol: float = 1e-6) -> PairSectorState:
    """Propagate a pair-sector state by ``exp(-i H dt)`` ``steps`` times.

    The free part ``omega (N_A - N_Atilde)`` vanishes on the pair sector, so
    the step propagator is ``exp(gamma dt K)``, computed once by scaling and
    squaring (exact up to rounding in the truncated space).
    """
    if steps < 0 or dt < 0:
        raise ValidationError("dt and steps must be non-negative")
    if steps == 0 or dt == 0.0:
        return state
    n_max = state.n_max
    n = np.arange(n_max + 1)
    h_free = omega * np.diag(n - n)  # N_A - N_Atilde on |n, n~>
    step = scipy.linalg.expm(-1j * dt * h_free + gamma * dt * pair_generator(n_max))
    step = step.real
    c = state.amps.copy()
    for _ in range(int(steps)):
        c = step @ c
        if not np.all(np.isfinite(c)):
            raise NonFiniteAmplitude("amplitudes became non-finite during propagation")
    out = PairSectorState(c)
    if out.leakage > tol:
        raise TruncationTooSmall(
            f"estimated leakage {out.leakage:.3g} exceeds {tol:g} at n_max={n_max}",
            leakage=out.leakage,
            n_max=n_max,
        )
    return out


def expectation(state: PairSectorState, observable: str) -> float:
    """Expectation of a pair-sector observable.

    ``observable`` is one of ``N_A``, ``N_Atilde``, ``A+Atilde+`` (pair
    creation) or ``AAtilde`` (pair annihilation).
    """
    key = _OBSERVABLE_ALIASES.get(observable)
    if key is None:
        raise UnknownObservable(f"unknown observable {observable!r}; choose from {OBSERVABLES}")
    c = state.amps
    n = np.arange(c.size)
    if key in ("N_A", "N_Atilde"):
        return math.fsum((n * c**2).tolist())
    if key == "A+Atilde+":
        # <psi| A^dag Atilde^dag |psi> = sum_n (n+1) c_{n+1} c_n
        return math.fsum(((n[:-1] + 1) * c[1:] * c[:-1]).tolist())
    return math.fsum((n[1:] * c[1:] * c[:-1]).tolist())


def inner(a: PairSectorState, b: PairSectorState) -> float:
    m = min(a.amps.size, b.amps.size)
    return math.fsum((a.amps[:m] * b.amps[:m]).tolist())


def fidelity(a: PairSectorState, b: PairSectorState) -> float:
    return inner(a, b) ** 2


def oracle_entropy(state: PairSectorState, tol: float = 1e-6) -> float:
    """Entropy of the reduced system-mode density matrix.

    Tracing out the mirror modes leaves ``diag(c_n**2)``; the distribution
    is renormalized before ``-sum p ln p``.
    """
    if state.leakage > tol:
        raise TruncationTooSmall(
            f"leakage {state.leakage:.3g} exceeds {tol:g}", leakage=state.leakage,
            n_max=state.n_max,
        )
    rho = np.outer(state.amps, state.amps)
    # partial trace over the mirror mode of sum c_n c_m |n,n~><m,m~| keeps the diagonal
    p = np.diag(rho).copy()
    p = p / p.sum()
    p = p[p > 0]
    return max(0.0, -math.fsum((p * np.log(p)).tolist()))


def _full_grid_hamiltonian(n_max: int, omega: float, gamma: float) -> sp.csr_matrix:
    """Sparse ``H = omega (N_A - N_Atilde) + i gamma (A^dag Atilde^dag - A Atilde)``.

    Basis index ``n * (n_max+1) + m`` for ``|n, m~>``.
    """
    d = n_max + 1
    a = sp.diags(np.sqrt(np.arange(1, d, dtype=float)), 1, shape=(d, d), format="csr")
    eye = sp.identity(d, format="csr")
    a_sys = sp.kron(a, eye, format="csr")
    a_mir = sp.kron(eye, a, format="csr")
    num = sp.diags(np.arange(d, dtype=float), 0, format="csr")
    h0 = omega * (sp.kron(num, eye) - sp.kron(eye, num))
    pair_up = a_sys.T @ a_mir.T
    hi = 1j * gamma * (pair_up - a_sys @ a_mir)
    return (h0 + hi).tocsr()


@dataclass(frozen=True)
class ChargeProbeResult:
    times: np.ndarray
    charges: np.ndarray
    drift: float
    leakage: float


def charge_conservation_probe(initial: FullGridState, omega: float, gamma: float, t: float,
                              samples: int = 21, tol: float = 1e-12) -> ChargeProbeResult:
    """Evolve on the full ``(n, m)`` grid and track ``<N_A - N_Atilde>``.

    ``leakage`` is the largest population seen on the truncation boundary
    (``n = n_max`` or ``m = n_max``); TruncationTooSmall is raised when it
    exceeds ``tol``.
    """
    if abs(initial.norm2 - 1.0) > 1e-9:
        raise ValidationError(f"initial state is not normalized (norm^2 = {initial.norm2})")
    n_max = initial.n_max
    d = n_max + 1
    h = _full_grid_hamiltonian(n_max, omega, gamma)
    times = np.linspace(0.0, float(t), int(samples))
    psi0 = initial.amps.reshape(-1).astype(complex)
    states = expm_multiply(-1j * h, psi0, start=0.0, stop=float(t), num=int(samples),
                           endpoint=True)
    n_idx, m_idx = np.divmod(np.arange(d * d), d)
    q = (n_idx - m_idx).astype(float)
    boundary = (n_idx == n_max) | (m_idx == n_max)
    charges = np.empty(len(times))
    leakage = 0.0
    for i, psi in enumerate(states):
        if not np.all(np.isfinite(psi)):
            raise NonFiniteAmplitude("amplitudes became non-finite during propagation")
        p = np.abs(psi) ** 2
        charges[i] = float(np.dot(q, p) / p.sum())
        leakage = max(leakage, float(p[boundary].sum()))
    if leakage > tol:
        raise TruncationTooSmall(
            f"boundary population {leakage:.3g} exceeds {tol:g} at n_max={n_max}",
            leakage=leakage,
            n_max=n_max,
        )
    drift = float(np.max(np.abs(charges - charges[0])))
    return ChargeProbeResult(times, charges, drift, leakage)
