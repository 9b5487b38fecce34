"""Config resolution, validation, builders, and the TOML emitter."""
import json

import pytest

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from daqc_ga import config, rydberg
from daqc_ga.config import (
    DEFAULTS,
    ConfigError,
    analog_noise_from_config,
    device_from_config,
    dump_toml,
    ga_config_from,
    load_config,
    register_from_config,
    resolve_config,
    template_from_config,
    write_resolved_config,
)


class TestResolve:
    def test_empty_override_gives_defaults(self):
        cfg = resolve_config({})
        assert cfg == DEFAULTS
        assert cfg is not DEFAULTS

    def test_nested_override(self):
        cfg = resolve_config({"ga": {"population_size": 60}})
        assert cfg["ga"]["population_size"] == 60
        assert cfg["ga"]["decay_gamma"] == DEFAULTS["ga"]["decay_gamma"]

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            resolve_config({"gaa": {}})
        with pytest.raises(ConfigError, match="'ga.popsize'"):
            resolve_config({"ga": {"popsize": 10}})

    def test_scalar_for_table_rejected(self):
        with pytest.raises(ConfigError, match="must be a table"):
            resolve_config({"ga": 5})


class TestLoad:
    def test_toml(self, tmp_path):
        p = tmp_path / "cfg.toml"
        p.write_text('seed = 7\n[ga]\npopulation_size = 60\n')
        cfg = load_config(p)
        assert cfg["seed"] == 7
        assert cfg["ga"]["population_size"] == 60

    def test_json(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"seed": 9}))
        assert load_config(p)["seed"] == 9


class TestBuilders:
    def test_ring_register(self):
        reg = register_from_config(resolve_config({}), 4)
        assert reg.n_atoms == 4

    def test_inline_register(self):
        cfg = resolve_config({"register": {"kind": "inline", "coordinates": [[0, 0], [8, 0]]}})
        reg = register_from_config(cfg, 2)
        assert reg.coordinates[1, 0] == 8.0

    def test_file_register(self, tmp_path):
        p = tmp_path / "atoms.reg"
        p.write_text("0 0\n8 0\n")
        cfg = resolve_config({"register": {"kind": "file", "path": str(p)}})
        assert register_from_config(cfg, 2).n_atoms == 2

    def test_unknown_register_kind(self):
        cfg = resolve_config({"register": {"kind": "grid"}})
        with pytest.raises(ConfigError):
            register_from_config(cfg, 2)

    def test_device(self):
        dev = device_from_config(resolve_config({"device": {"c6": 100.0}}))
        assert dev.c6 == 100.0

    def test_template(self):
        tpl = template_from_config(resolve_config({}), 2)
        assert tpl.n_qubits == 2
        assert tpl.block1.duration_ns == 50.0
        assert tpl.t2_bounds_ns == (0.0, 800.0)

    def test_ga_config(self):
        ga = ga_config_from(resolve_config({"seed": 4}))
        assert ga.seed == 4
        assert ga.population_size == 200
        assert ga.stop_error == 0.01

    def test_ga_config_seed_override(self):
        assert ga_config_from(resolve_config({}), seed=11).seed == 11

    def test_stop_error_zero_disables(self):
        ga = ga_config_from(resolve_config({"ga": {"stop_error": 0}}))
        assert ga.stop_error is None

    def test_rate_change_window(self):
        cfg = resolve_config({"ga": {"rate_change_window": 10, "rate_change_threshold": 1e-6}})
        ga = ga_config_from(cfg)
        assert ga.rate_change_window == 10
        assert ga.rate_change_threshold == 1e-6

    def test_noise_model(self):
        nm = analog_noise_from_config(resolve_config({"noise": {"detuning_sd": 0.0}}))
        assert nm.detuning_sd == 0.0
        assert nm.rabi_rel_sd == 0.01


class TestTomlEmitter:
    def test_defaults_round_trip_through_tomllib(self):
        text = dump_toml(DEFAULTS)
        assert tomllib.loads(text) == DEFAULTS

    def test_write_resolved(self, tmp_path):
        cfg = resolve_config({"ga": {"population_size": 60}})
        p = tmp_path / "resolved.toml"
        write_resolved_config(cfg, p)
        with open(p, "rb") as f:
            assert tomllib.load(f) == cfg

    def test_float_precision_preserved(self):
        text = dump_toml({"device": {"c6": rydberg.DEFAULT_C6}})
        assert tomllib.loads(text)["device"]["c6"] == rydberg.DEFAULT_C6

    def test_unserializable_type(self):
        with pytest.raises(TypeError):
            dump_toml({"x": object()})
