"""Strict JSON run-configuration parsing.

A configuration file is one of four kinds, told apart by a marker key:

* network (no marker): the fields of :class:`NetworkConfig`, with optional
  nested ``sat`` and ``fiber`` objects;
* sweep (``axis``): ``base``, ``axis``, ``values``, ``realizations``, ``metrics``;
* robustness (``protocol``): ``base``, ``protocol``, ``mode``, ``realizations``,
  ``grid_step``, ``refine_step``, ``pair_budget``, ``target_mean_degree``;
* fitcheck (``sweep_csv``): ``sweep_csv``, ``k_tolerance``, ``l_tolerance``.

Unknown keys are rejected. Missing hardware constants take the defaults from
:mod:`qnetsim.channel`.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields

from .channel import FiberParams, SatelliteParams
from .config import NetworkConfig
from .ensemble import DEFAULT_REALIZATIONS, METRIC_SELECTORS, PROTOCOLS, SweepSpec
from .errors import ConfigError

SAT_KEYS = {f.name: float for f in fields(SatelliteParams)}
FIBER_KEYS = {f.name: float for f in fields(FiberParams)}
NETWORK_KEYS = {"model": str, "n": int, "radius": float, "rho": float, "n_p": int,
                "sat": SAT_KEYS, "fiber": FIBER_KEYS, "er_mean_degree": float,
                "ba_m": int, "seed": int}
SWEEP_KEYS = {"base": NETWORK_KEYS, "axis": str, "values": list, "realizations": int,
              "metrics": list}
ROBUSTNESS_KEYS = {"base": NETWORK_KEYS, "protocol": str, "mode": str, "realizations": int,
                   "grid_step": float, "refine_step": float, "pair_budget": int,
                   "target_mean_degree": float}
FITCHECK_KEYS = {"sweep_csv": str, "k_tolerance": float, "l_tolerance": float}


@dataclass(frozen=True)
class RobustnessSpec:
    base: NetworkConfig
    protocol: str
    realizations: int = DEFAULT_REALIZATIONS
    mode: str = "adaptive"
    grid_step: float = 0.01
    refine_step: float = 0.002
    pair_budget: int = 500
    target_mean_degree: float | None = None


@dataclass(frozen=True)
class FitcheckSpec:
    sweep_csv: str
    k_tolerance: float = 0.25
    l_tolerance: float = 0.20


def _kind(raw):
    if "axis" in raw:
        return "sweep", SWEEP_KEYS
    if "protocol" in raw:
        return "robustness", ROBUSTNESS_KEYS
    if "sweep_csv" in raw:
        return "fitcheck", FITCHECK_KEYS
    return "network", NETWORK_KEYS


def _check(raw, schema, prefix=""):
    if not isinstance(raw, dict):
        raise ConfigError("constraint-violation", "expected a JSON object", prefix or "<root>")
    for key, value in raw.items():
        where = f"{prefix}{key}"
        if key not in schema:
            raise ConfigError("unknown-key", f"unknown key {key!r}", where)
        kind = schema[key]
        if isinstance(kind, dict):
            _check(value, kind, where + ".")
        elif kind is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError("constraint-violation", f"expected an integer, got {value!r}", where)
        elif kind is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError("constraint-violation", f"expected a number, got {value!r}", where)
        elif kind is str:
            if not isinstance(value, str):
                raise ConfigError("constraint-violation", f"expected a string, got {value!r}", where)
        elif kind is list and not isinstance(value, list):
            raise ConfigError("constraint-violation", f"expected a list, got {value!r}", where)


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(raw, overrides):
    """Apply ``key=value`` strings (dotted keys for nesting) to a raw config dict."""
    _, schema = _kind(raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError("malformed", f"override {item!r} is not key=value")
        key, text = item.split("=", 1)
        parts = key.strip().split(".")
        node, sch = raw, schema
        for i, part in enumerate(parts):
            if not isinstance(sch, dict) or part not in sch:
                raise ConfigError("unknown-key", f"override refers to unknown key {key!r}", key)
            if i == len(parts) - 1:
                node[part] = _parse_value(text)
            else:
                node = node.setdefault(part, {})
                sch = sch[part]
    return raw


def _network(raw, prefix=""):
    raw = dict(raw)
    for key in ("model", "n"):
        if key not in raw:
            raise ConfigError("constraint-violation", f"missing required key {key!r}", prefix + key)
    if "radius" in raw and "rho" in raw:
        raise ConfigError("constraint-violation", "give exactly one of radius and rho",
                          prefix + "radius/rho")
    sat = SatelliteParams(**{k: float(v) for k, v in raw.pop("sat", {}).items()})
    fiber = FiberParams(**{k: float(v) for k, v in raw.pop("fiber", {}).items()})
    for key in ("radius", "rho", "er_mean_degree"):
        if key in raw:
            raw[key] = float(raw[key])
    return NetworkConfig(sat=sat, fiber=fiber, **raw)


def build_config(raw):
    """Validate a raw dict and build the matching config object."""
    kind, schema = _kind(raw)
    _check(raw, schema)
    try:
        if kind == "network":
            return _network(raw)
        if kind == "sweep":
            if "base" not in raw or "values" not in raw:
                raise ConfigError("constraint-violation", "sweep needs base and values")
            metrics = tuple(raw.get("metrics", METRIC_SELECTORS))
            return SweepSpec(_network(raw["base"], "base."), raw["axis"], tuple(raw["values"]),
                             raw.get("realizations", DEFAULT_REALIZATIONS), metrics)
        if kind == "robustness":
            if "base" not in raw:
                raise ConfigError("constraint-violation", "robustness config needs base")
            if raw["protocol"] not in PROTOCOLS:
                raise ConfigError("constraint-violation",
                                  f"protocol must be one of {PROTOCOLS}", "protocol")
            rest = {k: v for k, v in raw.items() if k != "base"}
            spec = RobustnessSpec(_network(raw["base"], "base."), **rest)
            if spec.realizations < 1:
                raise ConfigError("constraint-violation", "realizations must be >= 1", "realizations")
            return spec
        return FitcheckSpec(**raw)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError("constraint-violation", str(exc)) from exc


def load_raw(path):
    if not os.path.exists(path):
        raise ConfigError("not-found", "configuration file does not exist", str(path))
    with open(path) as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("malformed", exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("malformed", "top level must be a JSON object", str(path))
    return raw


def parse_config(path, overrides=()):
    """Read, override and validate a configuration file."""
    raw = apply_overrides(load_raw(path), overrides)
    spec = build_config(raw)
    if isinstance(spec, FitcheckSpec) and not os.path.isabs(spec.sweep_csv):
        base = os.path.dirname(os.path.abspath(path))
        spec = FitcheckSpec(os.path.join(base, spec.sweep_csv), spec.k_tolerance, spec.l_tolerance)
    return spec


def config_to_dict(spec):
    """Canonical dict form; :func:`build_config` of it reproduces ``spec``."""
    if isinstance(spec, NetworkConfig):
        return spec.to_dict()
    if isinstance(spec, SweepSpec):
        return {"base": spec.base.to_dict(), "axis": spec.axis, "values": list(spec.values),
                "realizations": spec.realizations, "metrics": list(spec.metrics)}
    if isinstance(spec, RobustnessSpec):
        d = {f.name: getattr(spec, f.name) for f in fields(spec)}
        d["base"] = spec.base.to_dict()
        if d["target_mean_degree"] is None:
            del d["target_mean_degree"]
        return d
    return {f.name: getattr(spec, f.name) for f in fields(spec)}
