"""Run configuration.

A config is a YAML mapping::

    grid:                       # list of modes
      - {omega: 1.0, gamma: 0.5}
      - {omega: 2.0, gamma: 0.25, energy: 2.0}
    codes:                      # named theta lists (or {thetas, grid})
      a: [1.0, 0.5]
      b: [1.001, 0.5]
    times: {t_start: 0.0, t_end: 20.0, samples: 201}
    oracle: {tolerance: 1.0e-12, n_max_cap: 4000}

plus one optional section per subcommand (``evolve``, ``chaos``,
``overlap``, ``entropy``, ``associate``, ``oracle_check``, ``oscillator``).
Validation errors carry the dotted path of the offending field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .exceptions import ConfigInvalid, MemoryModelError, NeedTwoCodes, UnknownCode
from .modes import MemoryCode, ModeGrid, build_grid

__all__ = ["RunConfig", "TimeGrid", "load_config"]

MAX_TOLERANCE = 1e-3


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    samples: int

    def values(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.samples)


def _number(raw, path, *, integer=False):
    if isinstance(raw, bool) or raw is None:
        raise ConfigInvalid(path, f"{path}: expected a number, got {raw!r}")
    try:
        value = int(raw) if integer else float(raw)
    except (TypeError, ValueError):
        raise ConfigInvalid(path, f"{path}: expected a number, got {raw!r}") from None
    if integer and value != raw:
        raise ConfigInvalid(path, f"{path}: expected an integer, got {raw!r}")
    if not math.isfinite(value):
        raise ConfigInvalid(path, f"{path}: must be finite")
    return value


def _mapping(raw, path):
    if not isinstance(raw, dict):
        raise ConfigInvalid(path, f"{path}: expected a mapping")
    return raw


def _grid(raw, path) -> ModeGrid:
    if not isinstance(raw, list) or not raw:
        raise ConfigInvalid(path, f"{path}: expected a non-empty list of modes")
    specs = []
    for i, entry in enumerate(raw):
        p = f"{path}[{i}]"
        entry = _mapping(entry, p)
        unknown = set(entry) - {"omega", "gamma", "energy"}
        if unknown:
            raise ConfigInvalid(p, f"{p}: unknown keys {sorted(unknown)}")
        for key in ("omega", "gamma"):
            if key not in entry:
                raise ConfigInvalid(f"{p}.{key}", f"{p}.{key}: missing")
        spec = [_number(entry["omega"], f"{p}.omega"), _number(entry["gamma"], f"{p}.gamma")]
        if entry.get("energy") is not None:
            spec.append(_number(entry["energy"], f"{p}.energy"))
        specs.append(tuple(spec))
    try:
        return build_grid(specs)
    except MemoryModelError as exc:
        index = getattr(exc, "index", None)
        raise ConfigInvalid(path if index is None else f"{path}[{index}]", str(exc)) from exc


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    grid: ModeGrid | None = None
    codes: dict = field(default_factory=dict)
    times: TimeGrid | None = None
    tolerance: float = 1e-12
    n_max_cap: int = 4000

    @classmethod
    def from_dict(cls, raw) -> "RunConfig":
        raw = _mapping(raw if raw is not None else {}, "<root>")
        grid = _grid(raw["grid"], "grid") if "grid" in raw else None
        codes = {}
        if "codes" in raw:
            for name, entry in _mapping(raw["codes"], "codes").items():
                p = f"codes.{name}"
                code_grid = grid
                thetas = entry
                if isinstance(entry, dict):
                    code_grid = _grid(entry["grid"], f"{p}.grid") if "grid" in entry else grid
                    thetas = entry.get("thetas")
                    p = f"{p}.thetas"
                if code_grid is None:
                    raise ConfigInvalid("grid", f"{p}: no grid defined")
                if not isinstance(thetas, list):
                    raise ConfigInvalid(p, f"{p}: expected a list of angles")
                values = tuple(_number(x, f"{p}[{i}]") for i, x in enumerate(thetas))
                if len(values) != len(code_grid):
                    raise ConfigInvalid(
                        p, f"{p}: {len(values)} angles for a {len(code_grid)}-mode grid"
                    )
                codes[str(name)] = MemoryCode(code_grid, values)
        times = None
        if "times" in raw:
            t = _mapping(raw["times"], "times")
            for key in ("t_start", "t_end", "samples"):
                if key not in t:
                    raise ConfigInvalid(f"times.{key}", f"times.{key}: missing")
            t_start = _number(t["t_start"], "times.t_start")
            t_end = _number(t["t_end"], "times.t_end")
            samples = _number(t["samples"], "times.samples", integer=True)
            if samples < 2:
                raise ConfigInvalid("times.samples", "times.samples: need at least 2 samples")
            if t_start < 0:
                raise ConfigInvalid("times.t_start", "times.t_start: must be >= 0")
            if not t_end > t_start:
                raise ConfigInvalid("times.t_end", "times.t_end: must exceed t_start")
            times = TimeGrid(t_start, t_end, samples)
        tolerance, cap = 1e-12, 4000
        if "oracle" in raw:
            o = _mapping(raw["oracle"], "oracle")
            if "tolerance" in o:
                tolerance = _number(o["tolerance"], "oracle.tolerance")
                if not 0 < tolerance <= MAX_TOLERANCE:
                    raise ConfigInvalid(
                        "oracle.tolerance", f"oracle.tolerance: must lie in (0, {MAX_TOLERANCE}]"
                    )
            if "n_max_cap" in o:
                cap = _number(o["n_max_cap"], "oracle.n_max_cap", integer=True)
                if cap < 0:
                    raise ConfigInvalid("oracle.n_max_cap", "oracle.n_max_cap: must be >= 0")
        return cls(raw, grid, codes, times, tolerance, cap)

    def section(self, name) -> dict:
        sec = self.raw.get(name, {})
        return _mapping(sec if sec is not None else {}, name)

    def code(self, name, path) -> MemoryCode:
        if name not in self.codes:
            raise UnknownCode(path, f"{path}: unknown code {name!r}")
        return self.codes[name]

    def require_times(self) -> TimeGrid:
        if self.times is None:
            raise ConfigInvalid("times", "times: section missing")
        return self.times

    def single_code(self, section) -> tuple[str, MemoryCode]:
        sec = self.section(section)
        if "code" in sec:
            name = str(sec["code"])
        elif len(self.codes) == 1:
            name = next(iter(self.codes))
        else:
            raise ConfigInvalid(f"{section}.code", f"{section}.code: name one code")
        return name, self.code(name, f"{section}.code")

    def two_codes(self, section) -> tuple[tuple[str, MemoryCode], tuple[str, MemoryCode]]:
        sec = self.section(section)
        names = sec.get("codes")
        if names is None:
            names = list(self.codes)
        if not isinstance(names, list) or len(names) != 2:
            raise NeedTwoCodes(f"{section}.codes", f"{section}.codes: name exactly two codes")
        a = self.code(str(names[0]), f"{section}.codes[0]")
        b = self.code(str(names[1]), f"{section}.codes[1]")
        return (str(names[0]), a), (str(names[1]), b)

    number = staticmethod(_number)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigInvalid("<file>", f"cannot read config {path}: {exc.strerror}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigInvalid("<file>", f"config is not valid YAML: {exc}") from exc
    return RunConfig.from_dict(raw)
