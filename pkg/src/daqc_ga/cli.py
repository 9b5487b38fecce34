"""Command-line experiment runner.

Subcommands:

    exact     ground energy / eigenvector of a .ham file
    run       one GA run from a config file (results, history, genome, pulses)
    sweep     one GA run per Hamiltonian file
    fidelity  analog-vs-digital fidelity sweeps with the coherent noise model
    pulses    render a stored genome as a pulse schedule

Exit codes: 0 success, 2 parse or configuration error, 3 numerical fault.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import ansatz, config, genetic, noise, pauli, pulse, rydberg

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _out_dir(path_str: str) -> Path:
    out = Path(path_str)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_meta(out: Path, extra: dict | None = None) -> None:
    # timestamps live here so result files stay byte-reproducible
    meta = {"completed_at_unix": time.time()}
    if extra:
        meta.update(extra)
    (out / "run_meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def cmd_exact(args) -> int:
    h = pauli.load_ham_file(args.hamiltonian)
    res = pauli.ground_state(h)
    print(f"qubits = {h.n_qubits}")
    print(f"terms = {h.n_terms}")
    print(f"ground_energy_hartree = {res.ground_energy!r}")
    if args.out:
        out = _out_dir(args.out)
        vec = [[a.real, a.imag] for a in res.ground_vector.amplitudes]
        (out / "eigenvector.json").write_text(
            json.dumps({"n_qubits": h.n_qubits, "ground_energy": res.ground_energy, "amplitudes": vec}) + "\n"
        )
        print(f"eigenvector written to {out / 'eigenvector.json'}")
    return EXIT_OK


def _run_one(cfg: dict, ham_path: str, out: Path, workers: int) -> genetic.GAResult:
    h = pauli.load_ham_file(ham_path)
    tpl = config.template_from_config(cfg, h.n_qubits)
    ga_cfg = config.ga_config_from(cfg)
    reference = pauli.ground_state(h)

    result = genetic.run(h, tpl, ga_cfg, reference=reference, workers=workers)

    genetic.save_result_json(result, out / "results.json")
    genetic.write_history_csv(result, out / "history.csv")
    ansatz.save_genome(result.best_genome, out / "best_genome.json")
    schedule = pulse.export_schedule(
        result.best_genome, tpl, cfg["ansatz"]["rotation_duration_ns"]
    )
    pulse.save_schedule(schedule, out / "schedule.json")
    config.write_resolved_config(cfg, out / "resolved_config.toml")

    final = result.history[-1]
    print(f"stop_reason = {result.stop_reason.value}")
    print(f"iterations = {final.iteration}")
    print(f"best_energy_hartree = {result.best_energy!r}")
    print(f"reference_energy_hartree = {reference.ground_energy!r}")
    print(f"error = {final.error_vs_reference!r}")
    print(f"overlap = {final.best_overlap!r}")
    return result


def cmd_run(args) -> int:
    cfg = config.load_config(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    ham = args.hamiltonian or cfg["hamiltonian"]
    if not ham:
        raise config.ConfigError("no Hamiltonian file given (config key 'hamiltonian' or positional)")
    out = _out_dir(args.out or cfg["output_dir"])
    t0 = time.time()
    _run_one(cfg, ham, out, args.workers or cfg["workers"])
    _write_meta(out, {"wall_seconds": time.time() - t0, "hamiltonian": str(ham)})
    print(f"results in {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = config.load_config(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    base = _out_dir(args.out or cfg["output_dir"])
    for ham in args.hamiltonians:
        out = _out_dir(base / Path(ham).stem)
        print(f"== {ham}")
        t0 = time.time()
        _run_one(cfg, ham, out, args.workers or cfg["workers"])
        _write_meta(out, {"wall_seconds": time.time() - t0, "hamiltonian": str(ham)})
    return EXIT_OK


def _write_sweep_csv(path: Path, rows, var_name: str, sigma: float, n_samples: int, seed: int) -> None:
    with open(path, "w", newline="") as f:
        f.write(f"# calibrated_cphase_sigma_rad = {sigma!r}\n")
        w = csv.writer(f)
        w.writerow([var_name, "analog_mean", "analog_se", "digital_mean", "digital_se", "n_samples", "seed"])
        for r in rows:
            w.writerow([r.sweep_var, repr(r.analog_mean), repr(r.analog_se),
                        repr(r.digital_mean), repr(r.digital_se), n_samples, seed])


def cmd_fidelity(args) -> int:
    cfg = config.load_config(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    fid = cfg["fidelity"]
    dev = config.device_from_config(cfg)
    nm = config.analog_noise_from_config(cfg)
    block = fid["block"]
    p = rydberg.AnalogParams(block["omega"], block["delta"], block["phi"])
    spacing = fid["spacing_um"]

    result = noise.fidelity_sweeps(
        build_register=lambda n: rydberg.ring_register(n, spacing),
        p=p,
        dev=dev,
        nm=nm,
        time_grid_ns=fid["time_grid_ns"],
        qubit_grid=fid["qubit_grid"],
        fixed_time_ns=fid["fixed_time_ns"],
        sweep_n_qubits=fid["n_qubits"],
        target_cnot_fidelity=cfg["noise"]["cphase_target_fidelity"],
        n_samples=fid["n_samples"],
        calibration_samples=cfg["noise"]["calibration_samples"],
        seed=cfg["seed"],
    )

    out = _out_dir(args.out or cfg["output_dir"])
    _write_sweep_csv(out / "time_sweep.csv", result.time_rows, "time_ns",
                     result.calibrated_sigma, result.n_samples, result.seed)
    _write_sweep_csv(out / "qubit_sweep.csv", result.qubit_rows, "n_qubits",
                     result.calibrated_sigma, result.n_samples, result.seed)
    config.write_resolved_config(cfg, out / "resolved_config.toml")
    _write_meta(out)

    print(f"calibrated_cphase_sigma_rad = {result.calibrated_sigma!r}")
    if result.crossing_time_ns is None:
        print("crossing_time_ns = none")
    else:
        lo, hi = result.crossing_bracket_ns
        print(f"crossing_time_ns = {result.crossing_time_ns:.1f} (bracket [{lo:.0f}, {hi:.0f}])")
    print(f"results in {out}")
    return EXIT_OK


def cmd_pulses(args) -> int:
    cfg = config.load_config(args.config)
    genome = ansatz.load_genome(args.genome)
    tpl = config.template_from_config(cfg, genome.n_qubits)
    schedule = pulse.export_schedule(genome, tpl, cfg["ansatz"]["rotation_duration_ns"])
    print(pulse.render_ascii(schedule))
    if args.out:
        out = _out_dir(args.out)
        pulse.save_schedule(schedule, out / "schedule.json")
        config.write_resolved_config(cfg, out / "resolved_config.toml")
        print(f"schedule written to {out / 'schedule.json'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="daqc-ga",
        description="Rydberg digital-analog genetic search for molecular ground states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact diagonalization of a .ham file")
    p.add_argument("hamiltonian")
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("run", help="one GA run from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default="")
    p.add_argument("hamiltonian", nargs="?", default="")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="one GA run per Hamiltonian file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default="")
    p.add_argument("hamiltonians", nargs="+")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fidelity", help="analog vs digital fidelity sweeps")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("pulses", help="pulse schedule for a stored genome")
    p.add_argument("genome")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_pulses)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (pauli.HamiltonianParseError, config.ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"numerical fault: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
