"""Analytic-versus-oracle comparison suite."""

from __future__ import annotations

import functools
import math

import numpy as np

from . import analytics, fock
from .exceptions import TruncationTooSmall
from .modes import build_grid, MemoryCode

__all__ = ["FORMULAS", "DEFAULT_R_SAMPLES", "PASS_THRESHOLD", "oracle_report"]

DEFAULT_R_SAMPLES = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
PASS_THRESHOLD = 1e-8
FORMULAS = (
    "occupation",
    "pair_creation",
    "schmidt_weights",
    "entanglement_entropy",
    "overlap",
    "generator_fidelity",
    "evolution_occupation",
    "evolution_fidelity",
)

_EVOLVE_GAMMA = 0.5
_EVOLVE_DT = 0.05


@functools.lru_cache(maxsize=256)
def _state_at(r, n_max, tol):
    # oracle state for squeeze parameter r: exp(-iG(theta)) with theta = -r
    return fock.apply_generator(-r, n_max, tol=tol)


@functools.lru_cache(maxsize=64)
def _evolved(r, tol, cap):
    # start from the memory state theta0 and propagate until gamma t - theta0 = r
    theta0 = max(2.0, -r)
    n = fock.n_max_for(max(theta0, abs(r)), tol, cap)
    start = _state_at(-theta0, n, tol)
    t = (r + theta0) / _EVOLVE_GAMMA
    steps = int(round(t / _EVOLVE_DT))
    dt = t / steps if steps else 0.0
    return fock.evolve(start, 1.0, _EVOLVE_GAMMA, dt, steps, tol=tol), n


def _analytic_state(r):
    grid = build_grid([(1.0, 1.0)])
    return MemoryCode(grid, (-r,)).at(0.0)


def _single(formula, r, tol, cap, r_samples):
    """Return (deviation, n_max, leakage) for one formula at one r."""
    if formula == "overlap":
        dev, n_used, leak = 0.0, 0, 0.0
        for r2 in r_samples:
            n = fock.n_max_for(max(abs(r), abs(r2)), tol, cap)
            a, b = _state_at(r, n, tol), _state_at(r2, n, tol)
            ref = analytics.overlap(_analytic_state(r), _analytic_state(r2))
            dev = max(dev, abs(fock.inner(a, b) - ref))
            n_used = max(n_used, n)
            leak = max(leak, a.leakage, b.leakage)
        return dev, n_used, leak
    if formula.startswith("evolution"):
        out, n = _evolved(r, tol, cap)
        if formula == "evolution_occupation":
            dev = abs(fock.expectation(out, "N_A") - math.sinh(r) ** 2)
        else:
            dev = abs(1.0 - fock.fidelity(out, fock.build_squeezed(r, n)))
        return dev, n, out.leakage
    n = fock.n_max_for(r, tol, cap)
    st = _state_at(r, n, tol)
    an = _analytic_state(r)
    if formula == "occupation":
        dev = abs(fock.expectation(st, "N_A") - analytics.occupation(an, 0))
    elif formula == "pair_creation":
        dev = abs(fock.expectation(st, "A+Atilde+") - analytics.pair_creation(an, 0))
    elif formula == "schmidt_weights":
        w = analytics.schmidt_weights(an, 0, n).weights
        dev = float(np.max(np.abs(st.probabilities() - w)))
    elif formula == "entanglement_entropy":
        dev = abs(fock.oracle_entropy(st, tol=1.0) - analytics.entanglement_entropy(an))
    elif formula == "generator_fidelity":
        dev = abs(1.0 - fock.fidelity(st, fock.build_squeezed(r, n)))
    else:
        raise ValueError(f"unknown formula {formula!r}")
    return dev, n, st.leakage


def _formula_entry(formula, r_samples, tol, cap):
    max_dev, n_used, leak = 0.0, 0, 0.0
    try:
        for r in r_samples:
            dev, n, lk = _single(formula, float(r), tol, cap, r_samples)
            max_dev, n_used, leak = max(max_dev, dev), max(n_used, n), max(leak, lk)
    except TruncationTooSmall as exc:
        return {"error": "TruncationTooSmall", "message": str(exc),
                "n_max_used": exc.n_max, "leakage": exc.leakage}
    return {"max_dev": max_dev, "n_max_used": n_used, "leakage": leak}


def oracle_report(r_samples=DEFAULT_R_SAMPLES, tolerance=1e-12, n_max_cap=4000,
                  executor=None) -> dict:
    """Per-formula maximum |analytic - oracle| over ``r_samples``.

    Returns ``{"formulas": {name: {...}}, "passed": bool, ...}``; a formula
    passes when its max deviation is below 1e-8.
    """
    r_samples = tuple(float(r) for r in r_samples)
    if executor is None:
        entries = [_formula_entry(f, r_samples, tolerance, n_max_cap) for f in FORMULAS]
    else:
        entries = list(executor.map(
            lambda f: _formula_entry(f, r_samples, tolerance, n_max_cap), FORMULAS))
    formulas = dict(zip(FORMULAS, entries))
    passed = all("max_dev" in e and e["max_dev"] < PASS_THRESHOLD for e in entries)
    return {
        "formulas": formulas,
        "n_max_cap": n_max_cap,
        "passed": passed,
        "r_samples": list(r_samples),
        "threshold": PASS_THRESHOLD,
        "tolerance": tolerance,
    }
