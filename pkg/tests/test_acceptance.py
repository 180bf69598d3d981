"""Acceptance criteria, one test per criterion.

Each test prints a single ``[AC nn] PASS|FAIL`` line with the measured value,
the tolerance and the runtime; the lines are repeated in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from dissipative_memory import analytics, chaos, crosscheck, fock
from dissipative_memory.cli import COMMANDS, run
from dissipative_memory.modes import MemoryCode, build_grid
from dissipative_memory.oscillator import OscParams, OscState, envelope_rate, integrate

R_SAMPLES = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)


def report(number, title, ok, detail, elapsed=None):
    line = f"[AC {number:02d}] {'PASS' if ok else 'FAIL'} {title}: {detail}"
    if elapsed is not None:
        line += f" ({elapsed:.2f} s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_ac01_oracle_equivalence():
    crosscheck._state_at.cache_clear()
    crosscheck._evolved.cache_clear()
    t0 = time.perf_counter()
    rep = crosscheck.oracle_report(R_SAMPLES, tolerance=1e-13)
    elapsed = time.perf_counter() - t0
    names = ("occupation", "overlap", "schmidt_weights", "entanglement_entropy")
    entries = [rep["formulas"][n] for n in names]
    assert all("max_dev" in e for e in entries), entries
    dev = max(e["max_dev"] for e in entries)
    leak = max(e["leakage"] for e in entries)
    ok = dev < 1e-8 and leak < 1e-12 and elapsed < 5.0
    report(1, "oracle equivalence", ok,
           f"max |dev| = {dev:.2e} < 1e-8, leakage = {leak:.2e} < 1e-12, runtime < 5 s",
           elapsed)


def test_ac02_generator():
    t0 = time.perf_counter()
    worst = 0.0
    for theta in np.linspace(0.0, 2.0, 21):
        n = fock.n_max_for(theta, 1e-14)
        st = fock.apply_generator(float(theta), n)
        worst = max(worst, 1.0 - fock.fidelity(st, fock.build_squeezed(-float(theta), n)))
    elapsed = time.perf_counter() - t0
    report(2, "generator exp(-iG) on vacuum", worst <= 1e-8 and elapsed < 5.0,
           f"1 - min fidelity = {worst:.2e} <= 1e-8 over theta in [0, 2], runtime < 5 s",
           elapsed)


def test_ac03_hamiltonian_evolution():
    t0 = time.perf_counter()
    n = 120
    out = fock.evolve(fock.vacuum(n), 1.0, 0.5, 0.01, 200)
    occ = fock.expectation(out, "N_A")
    infid = 1.0 - fock.fidelity(out, fock.build_squeezed(1.0, n))
    elapsed = time.perf_counter() - t0
    err = abs(occ - math.sinh(1.0) ** 2)
    report(3, "Hamiltonian evolution", err < 1e-7 and infid <= 1e-7 and elapsed < 10.0,
           f"N = {occ:.9f}, |N - sinh^2 1| = {err:.2e} < 1e-7, "
           f"1 - fidelity = {infid:.2e} <= 1e-7, runtime < 10 s", elapsed)


def test_ac04_constant_of_motion():
    t0 = time.perf_counter()
    res = fock.charge_conservation_probe(fock.basis_state(1, 0, 80), 1.0, 0.5, 2.0)
    elapsed = time.perf_counter() - t0
    report(4, "N_A - N_Atilde conserved", res.drift < 1e-9 and res.leakage < 1e-12,
           f"drift = {res.drift:.2e} < 1e-9, leakage = {res.leakage:.2e} < 1e-12", elapsed)


def test_ac05_lyapunov():
    t0 = time.perf_counter()
    worst = 0.0
    for gamma in (0.25, 0.5, 1.0):
        grid = build_grid([(1.0, gamma)])
        for dtheta in (1e-6, 1e-4, 1e-2):
            a, b = MemoryCode(grid, (1.0,)), MemoryCode(grid, (1.0 - dtheta,))
            window = chaos.asymptotic_window(a, b, 0, lo=2.0, hi=10.0)
            s = chaos.divergence_series(a, b, np.linspace(*window, 25))[0]
            worst = max(worst, chaos.lyapunov_estimate(s).relative_error)
    elapsed = time.perf_counter() - t0
    report(5, "Lyapunov exponent = 2 Gamma", worst < 0.02 and elapsed < 2.0,
           f"max relative error = {worst:.2e} < 2e-2, runtime < 2 s", elapsed)


def test_ac06_inequivalence():
    worst, values = 0.0, []
    for m in (1, 2, 5, 10, 20):
        grid = build_grid([(1.0, 0.5)] * m)
        a, b = MemoryCode(grid, (0.0,) * m), MemoryCode(grid, (1.0,) * m)
        lo = analytics.log_overlap(a.at(0.0), b.at(0.0))
        expected = -m * math.log(math.cosh(1.0))
        worst = max(worst, abs(lo - expected) / abs(expected))
        values.append(math.exp(lo))
    decreasing = all(x > y for x, y in zip(values, values[1:]))
    report(6, "overlap = cosh(1)^-M", worst < 1e-10 and decreasing,
           f"max relative error (log space) = {worst:.2e} < 1e-10, strictly decreasing "
           f"in M = {decreasing}")


def test_ac07_attractor():
    worst = 0.0
    for m in (1, 2, 5, 10):
        grid = build_grid([(1.0, 0.5)] * m)
        code = MemoryCode(grid, (0.0,) * m)
        t = 12.0 / 0.5
        ratio = analytics.attractor_ratio(code, t)
        worst = max(worst, abs(ratio - 2.0**m) / 2.0**m)
    report(7, "attractor limit 2^M", worst < 1e-6,
           f"max relative error = {worst:.2e} < 1e-6 at Gamma t = 12")


def test_ac08_entropy_divergence():
    grid = build_grid([(1.0, 0.5)])
    a, b = MemoryCode(grid, (1.0,)), MemoryCode(grid, (1.0 - 1e-3,))
    gaps = [chaos.entropy_divergence_check(a, b, t, 1e-4).gap for t in (4.0, 6.0, 10.0)]
    worst = max(gaps)
    report(8, "entropy-divergence relation", worst < 1e-6,
           f"max relative gap = {worst:.2e} < 1e-6 (per-mode quasi-equilibrium beta)")


def test_ac09_doubled_oscillator():
    t0 = time.perf_counter()
    p = OscParams(1.0, 0.2, 1.0)
    damped = integrate(p, OscState(1.0, 0.0, 0.0, 0.0), 50.0, 1e-3)
    y_max = float(np.max(np.abs(damped.y)))
    x_rate = envelope_rate(damped, "x")
    mirror = integrate(p, OscState(1.0, 0.0, 1e-8, 0.0), 50.0, 1e-3)
    y_rate = envelope_rate(mirror, "y")
    mixed = integrate(p, OscState(1.0, 0.0, 0.5, -0.2), 50.0, 1e-3)
    drift = mixed.h_drift()
    target = p.gamma_c / (2 * p.m)
    ex = abs(-x_rate - target) / target
    ey = abs(y_rate - target) / target
    elapsed = time.perf_counter() - t0
    ok = y_max <= 1e-12 and drift < 1e-8 and ex < 0.01 and ey < 0.01
    report(9, "doubled oscillator", ok,
           f"max|y| = {y_max:.1e} <= 1e-12, h drift = {drift:.2e} < 1e-8, "
           f"x rate = {x_rate:.6f} (rel err {ex:.1e}), y rate = {y_rate:.6f} "
           f"(rel err {ey:.1e}) vs 0.1 within 1%", elapsed)


def test_ac10_determinism(tmp_path, capsys):
    from test_cli import DEMO

    t0 = time.perf_counter()
    mismatched = []
    for command in sorted(COMMANDS):
        outs = []
        for i in range(2):
            d = tmp_path / f"{command}-{i}"
            assert run(command, DEMO, d) == 0
            outs.append({f.name: f.read_bytes() for f in sorted(d.iterdir())})
        if outs[0] != outs[1] or not outs[0]:
            mismatched.append(command)
    elapsed = time.perf_counter() - t0
    report(10, "CLI determinism", not mismatched,
           f"{len(COMMANDS)} subcommands byte-identical across runs"
           + (f"; differing: {mismatched}" if mismatched else ""), elapsed)
