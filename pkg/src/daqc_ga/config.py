"""Experiment configuration: TOML (or JSON mirror) in, resolved TOML out.

Every under-determined physical or algorithmic parameter lives here with an
explicit default, and every run writes back the fully resolved configuration
next to its results so it can be audited and replayed.
"""
from __future__ import annotations

import json
from math import pi
from pathlib import Path

import numpy as np

try:
    import tomllib  # py >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from . import rydberg
from .ansatz import AnsatzTemplate
from .genetic import GAConfig
from .noise import AnalogNoiseModel
from .rydberg import AnalogParams, DeviceConfig, Register


DEFAULTS: dict = {
    "hamiltonian": "",
    "seed": 0,
    "output_dir": "runs/out",
    "workers": 1,
    "register": {
        "kind": "ring",  # "ring", "file", or "inline"
        "spacing_um": rydberg.DEFAULT_SPACING_UM,
        "path": "",
        "coordinates": [],
    },
    "device": {
        "c6": rydberg.DEFAULT_C6,
        "spacing_um": rydberg.DEFAULT_SPACING_UM,
    },
    "ansatz": {
        "block1": {"omega": pi / 2, "delta": pi / 2, "phi": pi / 2, "duration_ns": 50.0},
        "block2": {"omega": pi, "delta": pi, "phi": pi},
        "t2_bounds_ns": [0.0, 800.0],
        "rotation_duration_ns": 100.0,
    },
    "ga": {
        "population_size": 200,
        "max_iterations": 1000,
        "stop_error": 0.01,
        "rate_change_window": 0,  # 0 disables the criterion
        "rate_change_threshold": 0.0,
        "mutation_p0": 0.3,
        "mutation_sigma_angle0": 0.5,
        "mutation_sigma_time0": 20.0,
        "decay_gamma": 0.995,
        "elitism": True,
    },
    "noise": {
        "rabi_rel_sd": 0.01,
        "detuning_sd": 0.6,
        "position_sd": 0.1,
        "cphase_target_fidelity": 0.99,
        "calibration_samples": 200000,
    },
    "fidelity": {
        "n_qubits": 6,
        "spacing_um": 12.0,  # crossing-friendly; weaker pairwise interaction than the GA default
        "time_grid_ns": [50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0,
                         500.0, 600.0, 700.0, 800.0, 900.0, 1000.0],
        "qubit_grid": [2, 3, 4, 5, 6, 7, 8],
        "fixed_time_ns": 250.0,
        "n_samples": 500,
        "block": {"omega": pi, "delta": pi, "phi": pi},
    },
}


class ConfigError(ValueError):
    pass


def _deep_merge(base: dict, override: dict, path: str = "") -> dict:
    out = dict(base)
    for key, value in override.items():
        if key not in base:
            raise ConfigError(f"unknown config key {path + key!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {path + key!r} must be a table")
            out[key] = _deep_merge(base[key], value, path + key + ".")
        else:
            out[key] = value
    return out


def load_config(path) -> dict:
    """Read TOML or JSON and merge it over the defaults."""
    path = Path(path)
    if path.suffix == ".json":
        raw = json.loads(path.read_text())
    else:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    return resolve_config(raw)


def resolve_config(raw: dict) -> dict:
    return _deep_merge(DEFAULTS, raw)


def register_from_config(cfg: dict, n_qubits: int) -> Register:
    reg_cfg = cfg["register"]
    kind = reg_cfg["kind"]
    if kind == "ring":
        return rydberg.ring_register(n_qubits, reg_cfg["spacing_um"])
    if kind == "file":
        return rydberg.load_register(reg_cfg["path"])
    if kind == "inline":
        return Register(np.array(reg_cfg["coordinates"], dtype=float))
    raise ConfigError(f"unknown register kind {kind!r}")


def device_from_config(cfg: dict) -> DeviceConfig:
    return DeviceConfig(c6=cfg["device"]["c6"], default_spacing=cfg["device"]["spacing_um"])


def _analog_params(d: dict, duration_ns: float = 0.0) -> AnalogParams:
    return AnalogParams(d["omega"], d["delta"], d["phi"], d.get("duration_ns", duration_ns))


def template_from_config(cfg: dict, n_qubits: int) -> AnsatzTemplate:
    return AnsatzTemplate(
        n_qubits=n_qubits,
        register=register_from_config(cfg, n_qubits),
        device=device_from_config(cfg),
        block1=_analog_params(cfg["ansatz"]["block1"]),
        block2_base=_analog_params(cfg["ansatz"]["block2"]),
        t2_bounds_ns=tuple(cfg["ansatz"]["t2_bounds_ns"]),
    )


def ga_config_from(cfg: dict, seed: int | None = None) -> GAConfig:
    ga = cfg["ga"]
    window = ga["rate_change_window"] or None
    return GAConfig(
        population_size=ga["population_size"],
        max_iterations=ga["max_iterations"],
        stop_error=ga["stop_error"] if ga["stop_error"] > 0 else None,
        rate_change_window=window,
        rate_change_threshold=ga["rate_change_threshold"] if window else None,
        mutation_p0=ga["mutation_p0"],
        mutation_sigma_angle0=ga["mutation_sigma_angle0"],
        mutation_sigma_time0=ga["mutation_sigma_time0"],
        decay_gamma=ga["decay_gamma"],
        elitism=ga["elitism"],
        seed=cfg["seed"] if seed is None else seed,
    )


def analog_noise_from_config(cfg: dict) -> AnalogNoiseModel:
    nz = cfg["noise"]
    return AnalogNoiseModel(
        rabi_rel_sd=nz["rabi_rel_sd"],
        detuning_sd=nz["detuning_sd"],
        position_sd=nz["position_sd"],
    )


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v)} to TOML")


def dump_toml(d: dict) -> str:
    """Minimal TOML emitter for the resolved-config structure (scalars,
    lists, and nested tables)."""
    lines: list[str] = []

    def emit(table: dict, prefix: str):
        scalars = {k: v for k, v in table.items() if not isinstance(v, dict)}
        subtables = {k: v for k, v in table.items() if isinstance(v, dict)}
        if prefix and (scalars or not subtables):
            lines.append(f"[{prefix}]")
        for k, v in scalars.items():
            lines.append(f"{k} = {_toml_value(v)}")
        if scalars:
            lines.append("")
        for k, v in subtables.items():
            emit(v, f"{prefix}.{k}" if prefix else k)

    emit(d, "")
    return "\n".join(lines).rstrip() + "\n"


def write_resolved_config(cfg: dict, path) -> None:
    Path(path).write_text(dump_toml(cfg))
