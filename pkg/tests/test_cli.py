"""CLI smoke tests: artifacts, exit codes, reproducibility."""
import csv
import json

import pytest

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

import daqc_ga
from daqc_ga.cli import EXIT_CONFIG, EXIT_OK, main

H2 = str(daqc_ga.corpus_path("h2_1.5A.ham"))


@pytest.fixture
def tiny_config(tmp_path):
    p = tmp_path / "cfg.toml"
    p.write_text(
        "[ga]\n"
        "population_size = 8\n"
        "max_iterations = 3\n"
        "stop_error = 0.0\n"
    )
    return str(p)


class TestExact:
    def test_prints_ground_energy(self, capsys):
        assert main(["exact", H2]) == EXIT_OK
        out = capsys.readouterr().out
        assert "qubits = 2" in out
        assert "-0.998152587" in out

    def test_writes_eigenvector(self, tmp_path, capsys):
        out = tmp_path / "exact"
        assert main(["exact", H2, "--out", str(out)]) == EXIT_OK
        d = json.loads((out / "eigenvector.json").read_text())
        assert len(d["amplitudes"]) == 4

    def test_missing_file_exit_code(self, capsys):
        assert main(["exact", "/nonexistent.ham"]) == EXIT_CONFIG

    def test_malformed_file_exit_code(self, tmp_path, capsys):
        p = tmp_path / "bad.ham"
        p.write_text("qubits: 1\n1.0 Q0\n")
        assert main(["exact", str(p)]) == EXIT_CONFIG


class TestRun:
    def test_writes_all_artifacts(self, tiny_config, tmp_path, capsys):
        out = tmp_path / "run"
        assert main(["run", "--config", tiny_config, "--out", str(out), H2]) == EXIT_OK
        for name in ("results.json", "history.csv", "best_genome.json", "schedule.json",
                     "resolved_config.toml", "run_meta.json"):
            assert (out / name).exists(), name

        with open(out / "resolved_config.toml", "rb") as f:
            resolved = tomllib.load(f)
        assert resolved["ga"]["population_size"] == 8

        with open(out / "history.csv") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 4  # iterations 0..3
        assert rows[-1]["iteration"] == "3"

    def test_seed_flag_changes_result(self, tiny_config, tmp_path, capsys):
        outs = []
        for seed in (1, 2):
            out = tmp_path / f"run{seed}"
            assert main(["run", "--config", tiny_config, "--seed", str(seed), "--out", str(out), H2]) == EXIT_OK
            outs.append(json.loads((out / "results.json").read_text())["best_energy"])
        assert outs[0] != outs[1]

    def test_same_seed_byte_identical_results(self, tiny_config, tmp_path, capsys):
        texts = []
        for tag in ("a", "b"):
            out = tmp_path / tag
            assert main(["run", "--config", tiny_config, "--seed", "5", "--out", str(out), H2]) == EXIT_OK
            texts.append((out / "results.json").read_text())
        assert texts[0] == texts[1]

    def test_no_hamiltonian_is_config_error(self, tiny_config, tmp_path, capsys):
        assert main(["run", "--config", tiny_config, "--out", str(tmp_path / "x")]) == EXIT_CONFIG

    def test_unknown_config_key_exit_code(self, tmp_path, capsys):
        p = tmp_path / "bad.toml"
        p.write_text("[ga]\npopsize = 8\n")
        assert main(["run", "--config", str(p), H2]) == EXIT_CONFIG


class TestSweep:
    def test_one_directory_per_hamiltonian(self, tiny_config, tmp_path, capsys):
        out = tmp_path / "sweep"
        assert main(["sweep", "--config", tiny_config, "--out", str(out), H2]) == EXIT_OK
        assert (out / "h2_1.5A" / "results.json").exists()


class TestFidelity:
    def test_zero_noise_fast_path(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.toml"
        cfg.write_text(
            "[noise]\n"
            "rabi_rel_sd = 0.0\n"
            "detuning_sd = 0.0\n"
            "position_sd = 0.0\n"
            "[fidelity]\n"
            "time_grid_ns = [100.0, 200.0]\n"
            "qubit_grid = [2, 3]\n"
            "n_samples = 5\n"
        )
        out = tmp_path / "fid"
        assert main(["fidelity", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        text = capsys.readouterr().out
        assert "calibrated_cphase_sigma_rad = 0.0" in text
        with open(out / "time_sweep.csv") as f:
            f.readline()  # sigma comment
            rows = list(csv.DictReader(f))
        assert [r["analog_mean"] for r in rows] == ["1.0", "1.0"]
        assert (out / "qubit_sweep.csv").exists()


class TestPulses:
    def test_render_from_saved_genome(self, tiny_config, tmp_path, capsys):
        run_out = tmp_path / "run"
        assert main(["run", "--config", tiny_config, "--out", str(run_out), H2]) == EXIT_OK
        capsys.readouterr()
        pulses_out = tmp_path / "pulses"
        assert main([
            "pulses", str(run_out / "best_genome.json"),
            "--config", tiny_config, "--out", str(pulses_out),
        ]) == EXIT_OK
        text = capsys.readouterr().out
        assert "global" in text
        assert (pulses_out / "schedule.json").exists()
