"""Command-line front end.

    dissipative-memory <subcommand> --config run.yaml --out results/ [--threads N]

Subcommands: evolve, chaos, overlap, entropy, associate, oracle-check,
oscillator.  Tables are CSV (header row, ``,`` separator, floats at 17
significant digits); reports are JSON with sorted snake_case keys.
Exit codes: 0 success, 1 computation error, 2 configuration/validation error.
Errors are written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analytics, chaos, crosscheck
from .config import RunConfig, load_config
from .estimators import feature_names, trajectory_table
from .exceptions import ConfigInvalid, MemoryModelError
from .oscillator import OscParams, OscState, envelope_rate, integrate

__all__ = ["main", "run"]


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    _atomic_write(path, buf.getvalue())
    return path


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _clean(obj):
    # JSON has no inf/nan; encode them as strings
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)) and not math.isfinite(obj):
        return str(float(obj))
    return obj


def write_json(path: Path, payload):
    text = json.dumps(_clean(payload), indent=2, sort_keys=True, default=_json_default)
    _atomic_write(path, text + "\n")
    return path


# -- subcommands -------------------------------------------------------------


def cmd_evolve(cfg: RunConfig, out: Path, executor=None):
    _, code = cfg.single_code("evolve")
    times = cfg.require_times().values()
    table = trajectory_table(code, times)
    header = ["t"] + feature_names(len(code))
    rows = ([t] + list(row) for t, row in zip(times, table))
    return [write_csv(out / "evolve.csv", header, rows)]


def _window_for(cfg, a, b, k, sec):
    if "window" in sec and sec["window"] is not None:
        w = sec["window"]
        if not isinstance(w, list) or len(w) != 2:
            raise ConfigInvalid("chaos.window", "chaos.window: expected [t_lo, t_hi]")
        lo = cfg.number(w[0], "chaos.window[0]")
        hi = cfg.number(w[1], "chaos.window[1]")
        if not 0 <= lo < hi:
            raise ConfigInvalid("chaos.window", "chaos.window: need 0 <= t_lo < t_hi")
        return lo, hi
    return chaos.asymptotic_window(a, b, k)


def cmd_chaos(cfg: RunConfig, out: Path, executor=None):
    sec = cfg.section("chaos")
    (name_a, a), (name_b, b) = cfg.two_codes("chaos")
    times = cfg.require_times().values()
    n_window = cfg.number(sec.get("window_samples", 25), "chaos.window_samples", integer=True)
    if n_window < 2:
        raise ConfigInvalid("chaos.window_samples", "chaos.window_samples: need at least 2")

    series = chaos.divergence_series(a, b, times)
    div_rows = []
    for s in series:
        for t, dn, lin in zip(s.times, s.delta_n, s.linearized):
            div_rows.append([s.mode, t, s.delta_theta, dn, lin])
    files = [write_csv(out / "divergence.csv",
                       ["mode", "t", "delta_theta", "delta_n", "delta_n_linearized"], div_rows)]

    lyap_rows = []
    for k in range(len(a)):
        lo, hi = _window_for(cfg, a, b, k, sec)
        wt = np.linspace(lo, hi, n_window)
        ws = chaos.divergence_series(a, b, wt)[k]
        try:
            fit = chaos.lyapunov_estimate(ws)
        except MemoryModelError as exc:
            lyap_rows.append([k, None, 2.0 * a.grid[k].gamma, None, lo, hi, None, n_window,
                              type(exc).__name__])
            continue
        lyap_rows.append([k, fit.exponent, fit.reference, fit.relative_error, fit.window[0],
                          fit.window[1], fit.residual, fit.n_samples, "ok"])
    files.append(write_csv(
        out / "lyapunov.csv",
        ["mode", "exponent", "reference", "relative_error", "t_lo", "t_hi", "residual",
         "n_samples", "flag"],
        lyap_rows,
    ))

    life_rows = []
    for name, code in ((name_a, a), (name_b, b)):
        rep = chaos.lifetimes(code)
        for k, lt in enumerate(rep.per_mode):
            flag = "negative_theta" if k in rep.negative_modes else "ok"
            life_rows.append([name, k, code.thetas[k], code.grid[k].gamma, lt, rep.tau,
                              rep.tau_min, rep.recognition_window, flag])
    files.append(write_csv(
        out / "lifetimes.csv",
        ["code", "mode", "theta", "gamma", "lifetime", "tau", "tau_min",
         "recognition_window", "flag"],
        life_rows,
    ))

    cross = chaos.crossing_times(a, b)
    files.append(write_csv(out / "crossings.csv", ["mode", "t_exact", "t_approx"],
                           ([c.mode, c.exact, c.approx] for c in cross)))
    return files


def cmd_overlap(cfg: RunConfig, out: Path, executor=None):
    sec = cfg.section("overlap")
    (_, a), (_, b) = cfg.two_codes("overlap")
    lag = cfg.number(sec.get("lag", 0.0), "overlap.lag")
    if lag < 0:
        raise ConfigInvalid("overlap.lag", "overlap.lag: must be >= 0")
    rows = []
    for t in cfg.require_times().values():
        sa, sb = a.at(float(t)), b.at(float(t) + lag)
        lo = analytics.log_overlap(sa, sb)
        rows.append([t, t + lag, lo, math.exp(lo)])
    return [write_csv(out / "overlap.csv", ["t", "t_prime", "log_overlap", "overlap"], rows)]


def cmd_entropy(cfg: RunConfig, out: Path, executor=None):
    _, code = cfg.single_code("entropy")
    m = len(code)
    rows = []
    for t in cfg.require_times().values():
        s = analytics.mode_entropies(code.at(float(t)))
        rows.append([t, *s, math.fsum(s.tolist())])
    header = ["t"] + [f"S_{k}" for k in range(m)] + ["S"]
    return [write_csv(out / "entropy.csv", header, rows)]


def cmd_associate(cfg: RunConfig, out: Path, executor=None):
    sec = cfg.section("associate")
    names = sec.get("codes")
    if names is None:
        names = list(cfg.codes)
    if not isinstance(names, list) or len(names) < 2:
        raise ConfigInvalid("associate.codes", "associate.codes: name at least two codes")
    codes = [cfg.code(str(n), f"associate.codes[{i}]") for i, n in enumerate(names)]
    if "threshold" not in sec:
        raise ConfigInvalid("associate.threshold", "associate.threshold: missing")
    threshold = cfg.number(sec["threshold"], "associate.threshold")
    events = chaos.association_events(codes, cfg.require_times().values(), threshold,
                                      executor=executor)
    rows = ([names[e.pair[0]], names[e.pair[1]], e.time, e.overlap] for e in events)
    return [write_csv(out / "associations.csv", ["code_i", "code_j", "t", "overlap"], rows)]


def cmd_oracle_check(cfg: RunConfig, out: Path, executor=None):
    sec = cfg.section("oracle_check")
    r_samples = sec.get("r_samples", list(crosscheck.DEFAULT_R_SAMPLES))
    if not isinstance(r_samples, list) or not r_samples:
        raise ConfigInvalid("oracle_check.r_samples", "oracle_check.r_samples: non-empty list")
    r_samples = [cfg.number(r, f"oracle_check.r_samples[{i}]") for i, r in enumerate(r_samples)]
    report = crosscheck.oracle_report(r_samples, cfg.tolerance, cfg.n_max_cap, executor=executor)
    path = write_json(out / "oracle_check.json", report)
    return [path], (0 if report["passed"] else 1)


_OSC_KEYS = ("m", "gamma", "k", "x0", "v_x0", "y0", "v_y0", "t_end", "dt")
_OSC_DEFAULTS = {"m": 1.0, "gamma": 0.2, "k": 1.0, "x0": 1.0, "v_x0": 0.0, "y0": 0.0,
                 "v_y0": 0.0, "t_end": 50.0, "dt": 1e-3}


def cmd_oscillator(cfg: RunConfig, out: Path, executor=None):
    sec = cfg.section("oscillator")
    unknown = set(sec) - set(_OSC_KEYS)
    if unknown:
        raise ConfigInvalid(f"oscillator.{sorted(unknown)[0]}", "oscillator: unknown key")
    v = {k: cfg.number(sec.get(k, d), f"oscillator.{k}") for k, d in _OSC_DEFAULTS.items()}
    if v["dt"] <= 0:
        raise ConfigInvalid("dt", "dt: must be > 0")
    if v["t_end"] < v["dt"]:
        raise ConfigInvalid("t_end", "t_end: must be >= dt")
    try:
        params = OscParams(v["m"], v["gamma"], v["k"])
    except MemoryModelError as exc:
        raise ConfigInvalid("oscillator", str(exc)) from exc
    traj = integrate(params, OscState(v["x0"], v["v_x0"], v["y0"], v["v_y0"]),
                     v["t_end"], v["dt"])
    rows = (
        [t, *s, h] for t, s, h in zip(traj.times, traj.states, traj.h)
    )
    files = [write_csv(out / "oscillator.csv", ["t", "x", "v_x", "y", "v_y", "h"], rows)]
    summary = {
        "h_initial": float(traj.h[0]),
        "h_drift": traj.h_drift(),
        "decay_rate_expected": params.decay_rate,
        "underdamped": params.underdamped,
        "max_abs_y": float(np.max(np.abs(traj.y))),
    }
    if params.underdamped:
        for coord in ("x", "y"):
            try:
                summary[f"{coord}_envelope_rate"] = envelope_rate(traj, coord)
            except MemoryModelError:
                summary[f"{coord}_envelope_rate"] = None
    files.append(write_json(out / "oscillator_summary.json", summary))
    return files


COMMANDS = {
    "evolve": cmd_evolve,
    "chaos": cmd_chaos,
    "overlap": cmd_overlap,
    "entropy": cmd_entropy,
    "associate": cmd_associate,
    "oracle-check": cmd_oracle_check,
    "oscillator": cmd_oscillator,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="dissipative-memory",
        description="Memory-state simulation of the doubled-oscillator dissipative model.",
    )
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="YAML run configuration")
    ap.add_argument("--out", default="out", help="output directory (default: out)")
    ap.add_argument("--threads", type=int, default=1, help="worker threads (default: 1)")
    return ap


def _error(exc, stream):
    payload = exc.to_dict() if isinstance(exc, MemoryModelError) else {
        "error": type(exc).__name__, "message": str(exc)}
    payload["exit_code"] = getattr(exc, "exit_code", 1)
    stream.write(json.dumps(_clean(payload), sort_keys=True, default=_json_default) + "\n")
    return payload["exit_code"]


def run(command, config, out, threads=1, stderr=None) -> int:
    """Run one subcommand; returns the process exit code."""
    stderr = stderr or sys.stderr
    try:
        if threads < 1:
            raise ConfigInvalid("--threads", "--threads: must be >= 1")
        cfg = config if isinstance(config, RunConfig) else load_config(config)
        out = Path(out)
        with contextlib.ExitStack() as stack:
            executor = (stack.enter_context(ThreadPoolExecutor(max_workers=threads))
                        if threads > 1 else None)
            result = COMMANDS[command](cfg, out, executor)
    except MemoryModelError as exc:
        return _error(exc, stderr)
    except (ValueError, ArithmeticError) as exc:
        return _error(exc, stderr)
    code = 0
    if isinstance(result, tuple):
        result, code = result
    for path in result:
        print(path)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args.command, args.config, args.out, args.threads)


if __name__ == "__main__":
    raise SystemExit(main())
