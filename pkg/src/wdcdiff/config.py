"""Run configuration: a versioned JSON document with explicit defaults.

Example::

    {
      "schema": "wdcdiff.config/1",
      "alpha": 1.0, "m": 1, "weight": "standard(1)",
      "phi1": "identity", "u1": "1",
      "phi2": "scale(-1, mobius(0.3))", "u2": "1",
      "grid": {"J": 12, "M0": 8, "refine_depth": 6},
      "seed": 7
    }

A "preset" key (case1..case4) may replace the space and symbol keys.
"""

import copy
import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from .errors import ConfigError
from .grid import AGrid, DiskGrid
from .presets import PRESETS, Preset, preset
from .symbols import SpaceParams, SymbolPair, parse_symbol, parse_weight

SCHEMA = "wdcdiff.config/1"

DEFAULTS: Dict[str, Any] = {
    "schema": SCHEMA,
    "preset": None,
    "alpha": None,
    "m": None,
    "weight": None,
    "phi1": None, "u1": "1", "phi2": None, "u2": "1",
    "grid": {"J": 14, "M0": 16, "refine_depth": 6},
    "a_grid": {"levels": None, "angles": 32},
    "n_schedule": None,
    "tail_start": 256,
    "seed": 0,
    "oracle": True,
    "check_grid": {"J": 10, "M0": 4},
    "output": {"path": None, "format": "json", "traces": False},
}

_SECTIONS = ("grid", "a_grid", "check_grid", "output")
_SPACE_KEYS = ("alpha", "m", "weight", "phi1", "u1", "phi2", "u2")


def _merge(user: Dict[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(DEFAULTS)
    unknown = set(user) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for k, v in user.items():
        if k in _SECTIONS:
            if not isinstance(v, dict):
                raise ConfigError(f"{k!r} must be an object")
            bad = set(v) - set(DEFAULTS[k])
            if bad:
                raise ConfigError(f"unknown keys in {k!r}: {sorted(bad)}")
            out[k].update(v)
        else:
            out[k] = v
    return out


def _int_in(d, key, lo, hi, where):
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int) or not lo <= v <= hi:
        raise ConfigError(f"{where}.{key} must be an integer in [{lo}, {hi}], got {v!r}")
    return v


@dataclass(frozen=True)
class RunConfig:
    raw: Dict[str, Any]          # fully defaulted document, echoed into reports
    params: Optional[SpaceParams]
    pair: Optional[SymbolPair]
    grid: DiskGrid
    a_grid: AGrid
    check_grid: DiskGrid
    refine_depth: int
    n_schedule: Optional[List[int]]
    tail_start: int
    seed: int
    oracle: bool
    out_path: Optional[str]
    out_format: str
    traces: bool

    @property
    def has_pair(self) -> bool:
        return self.pair is not None

    def echo(self) -> Dict[str, Any]:
        """Everything needed to re-run; output destinations are left out."""
        d = copy.deepcopy(self.raw)
        d.pop("output", None)
        return d


def _resolve_space(d: Dict[str, Any]):
    name = d["preset"]
    if name is not None:
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        given = [k for k in _SPACE_KEYS if d[k] is not None and DEFAULTS[k] != d[k]]
        if given:
            raise ConfigError(f"preset {name!r} cannot be combined with {given}")
        p: Preset = preset(name)
        return p.params, p.pair
    if d["phi1"] is None and d["phi2"] is None:
        return None, None
    missing = [k for k in ("alpha", "m", "weight", "phi1", "phi2") if d[k] is None]
    if missing:
        raise ConfigError(f"missing config keys: {missing}")
    try:
        params = SpaceParams(float(d["alpha"]), d["m"], parse_weight(str(d["weight"])))
        pair = SymbolPair(*(parse_symbol(str(d[k])) for k in ("phi1", "u1", "phi2", "u2")))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return params, pair


def from_dict(user: Dict[str, Any]) -> RunConfig:
    if not isinstance(user, dict):
        raise ConfigError("config must be a JSON object")
    d = _merge(user)
    if d["schema"] != SCHEMA:
        raise ConfigError(f"unsupported schema {d['schema']!r}; expected {SCHEMA!r}")
    if d["m"] is not None and (isinstance(d["m"], bool) or not isinstance(d["m"], int)):
        raise ConfigError("m must be an integer")
    params, pair = _resolve_space(d)

    g = d["grid"]
    grid = DiskGrid(_int_in(g, "J", 1, 20, "grid"), _int_in(g, "M0", 1, 1024, "grid"))
    depth = _int_in(g, "refine_depth", 0, 12, "grid")
    ag = d["a_grid"]
    angles = _int_in(ag, "angles", 1, 4096, "a_grid")
    if ag["levels"] is None:
        a_grid = AGrid.for_grid(grid, angles=angles)
    else:
        a_grid = AGrid(_int_in(ag, "levels", 1, 20, "a_grid"), angles)
    cg = d["check_grid"]
    check_grid = DiskGrid(_int_in(cg, "J", 1, 18, "check_grid"), _int_in(cg, "M0", 1, 256, "check_grid"))

    sched = d["n_schedule"]
    if sched is not None:
        if not isinstance(sched, list) or not sched or not all(
                isinstance(n, int) and not isinstance(n, bool) and n >= 0 for n in sched):
            raise ConfigError("n_schedule must be a nonempty list of nonnegative integers")
        sched = sorted(set(sched))
    tail = _int_in(d, "tail_start", 1, 10 ** 7, "config")
    if sched is not None and max(sched) < tail:
        raise ConfigError("tail_start lies beyond the n schedule")
    seed = _int_in(d, "seed", 0, 2 ** 64 - 1, "config")
    if not isinstance(d["oracle"], bool):
        raise ConfigError("oracle must be true or false")
    o = d["output"]
    if o["format"] not in ("json", "csv"):
        raise ConfigError("output.format must be 'json' or 'csv'")
    return RunConfig(d, params, pair, grid, a_grid, check_grid, depth, sched, tail, seed,
                     d["oracle"], o["path"], o["format"], bool(o["traces"]))


def read_document(path: str) -> Dict[str, Any]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return doc


def load(path: str) -> RunConfig:
    return from_dict(read_document(path))
