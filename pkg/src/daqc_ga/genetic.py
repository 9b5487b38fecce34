"""Elitist genetic search over ansatz parameters.

One iteration: evaluate every candidate, sort ascending by energy, keep the
best half, pair survivors (1,2), (3,4), ... and fill the discarded half with
their crossover children, then mutate every non-elite member.  Mutation
probability and strength both decay geometrically with the iteration index.

Every random draw comes from a fresh generator keyed by
(seed, iteration, candidate-or-pair index, stream tag), so results are
byte-identical regardless of evaluation order or worker count.
"""
from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from math import pi
from pathlib import Path
from typing import Optional

import numpy as np

from . import ansatz as ansatz_mod
from . import statevec
from .ansatz import AnsatzTemplate, CompiledAnsatz, Genome
from .pauli import PauliHamiltonian, SpectralResult

# stream tags for keyed RNGs
_INIT, _CROSS, _MUTATE = 0, 1, 2


class StopReason(str, Enum):
    ERROR_THRESHOLD = "error_threshold"
    MAX_ITERATIONS = "max_iterations"
    RATE_CHANGE = "rate_change"


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 200
    max_iterations: int = 1000
    stop_error: Optional[float] = 0.01
    rate_change_window: Optional[int] = None
    rate_change_threshold: Optional[float] = None
    mutation_p0: float = 0.3
    mutation_sigma_angle0: float = 0.5
    mutation_sigma_time0: float = 20.0
    decay_gamma: float = 0.995
    elitism: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError(f"population_size must be even and >= 4, got {self.population_size}")
        if not 0 < self.decay_gamma <= 1:
            raise ValueError(f"decay_gamma must be in (0, 1], got {self.decay_gamma}")
        if not 0 <= self.mutation_p0 <= 1:
            raise ValueError(f"mutation_p0 must be in [0, 1], got {self.mutation_p0}")
        if (self.rate_change_window is None) != (self.rate_change_threshold is None):
            raise ValueError("rate_change_window and rate_change_threshold go together")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    best_energy: float
    population_mean_energy: float
    best_overlap: Optional[float] = None
    error_vs_reference: Optional[float] = None


@dataclass(frozen=True)
class GAResult:
    best_genome: Genome
    best_energy: float
    history: tuple[IterationRecord, ...]
    stop_reason: StopReason

    def to_json_dict(self) -> dict:
        return {
            "best_genome": self.best_genome.to_json_dict(),
            "best_energy": self.best_energy,
            "stop_reason": self.stop_reason.value,
            "history": [
                {
                    "iteration": r.iteration,
                    "best_energy": r.best_energy,
                    "population_mean_energy": r.population_mean_energy,
                    "best_overlap": r.best_overlap,
                    "error_vs_reference": r.error_vs_reference,
                }
                for r in self.history
            ],
        }


def error_metric(e_found: float, e_ref: float) -> float:
    """|(E_ref - E_found) / E_ref|; magnitude-based so the sign of the
    (negative) reference energy cannot flip the criterion."""
    if e_ref == 0:
        raise ZeroDivisionError("reference energy is zero")
    return abs((e_ref - e_found) / e_ref)


def select(population: list[tuple[Genome, float]]) -> list[tuple[Genome, float]]:
    """Lowest-energy half, sorted ascending; stable for ties."""
    if len(population) % 2:
        raise ValueError(f"population size must be even, got {len(population)}")
    ranked = sorted(population, key=lambda ge: ge[1])
    return ranked[: len(population) // 2]


def crossover(p1: Genome, p2: Genome, rng: np.random.Generator) -> tuple[Genome, Genome]:
    """Per-slot complementary swap with probability 1/2.

    Each free slot (every rx/ry/rz angle and t2) independently keeps the
    parental assignment or exchanges it, so per-slot parameter multisets are
    conserved exactly.
    """
    if p1.n_qubits != p2.n_qubits:
        raise ValueError("parents are structurally different")
    n = p1.n_qubits
    swap = rng.random(3 * n + 1) < 0.5

    def pick(a, b, s):
        return (b, a) if s else (a, b)

    rx = [pick(p1.rx[q], p2.rx[q], swap[q]) for q in range(n)]
    ry = [pick(p1.ry[q], p2.ry[q], swap[n + q]) for q in range(n)]
    rz = [pick(p1.rz[q], p2.rz[q], swap[2 * n + q]) for q in range(n)]
    t2 = pick(p1.t2_ns, p2.t2_ns, swap[3 * n])
    child1 = Genome(tuple(a for a, _ in rx), tuple(a for a, _ in ry), tuple(a for a, _ in rz), t2[0])
    child2 = Genome(tuple(b for _, b in rx), tuple(b for _, b in ry), tuple(b for _, b in rz), t2[1])
    return child1, child2


def mutate(
    g: Genome,
    iteration: int,
    cfg: GAConfig,
    rng: np.random.Generator,
    t2_bounds_ns: tuple[float, float] = ansatz_mod.DEFAULT_T2_BOUNDS_NS,
) -> Genome:
    """Gaussian perturbations with geometrically decaying rate and strength.

    Angles wrap into [0, 2*pi); t2 clamps to its bounds.
    """
    decay = cfg.decay_gamma**iteration
    p = cfg.mutation_p0 * decay
    sigma_a = cfg.mutation_sigma_angle0 * decay
    sigma_t = cfg.mutation_sigma_time0 * decay

    def bump_angle(a):
        if rng.random() < p:
            return (a + rng.normal(0, sigma_a)) % (2 * pi)
        return a

    rx = tuple(bump_angle(a) for a in g.rx)
    ry = tuple(bump_angle(a) for a in g.ry)
    rz = tuple(bump_angle(a) for a in g.rz)
    t2 = g.t2_ns
    if rng.random() < p:
        lo, hi = t2_bounds_ns
        t2 = float(np.clip(t2 + rng.normal(0, sigma_t), lo, hi))
    return Genome(rx, ry, rz, t2)


def _keyed_rng(seed: int, iteration: int, index: int, tag: int) -> np.random.Generator:
    return np.random.default_rng([seed, iteration, index, tag])


_WORKER_COMPILED: Optional[CompiledAnsatz] = None
_WORKER_H: Optional[PauliHamiltonian] = None


def _worker_init(tpl: AnsatzTemplate, h: PauliHamiltonian) -> None:
    global _WORKER_COMPILED, _WORKER_H
    _WORKER_COMPILED = CompiledAnsatz(tpl)
    _WORKER_H = h


def _worker_energy(g: Genome) -> float:
    return _WORKER_COMPILED.energy(g, _WORKER_H)


def run(
    h: PauliHamiltonian,
    tpl: AnsatzTemplate,
    cfg: GAConfig,
    reference: Optional[SpectralResult] = None,
    workers: int = 1,
) -> GAResult:
    """Full GA loop; see module docstring for the iteration structure."""
    if h.n_qubits != tpl.n_qubits:
        raise ValueError(f"Hamiltonian has {h.n_qubits} qubits, template {tpl.n_qubits}")
    if cfg.stop_error is not None and reference is None:
        raise ValueError("stop_error criterion requires a reference spectral result")

    compiled = CompiledAnsatz(tpl)
    pool = ProcessPoolExecutor(workers, initializer=_worker_init, initargs=(tpl, h)) if workers > 1 else None

    def energies_of(genomes: list[Genome]) -> list[float]:
        if pool is not None:
            vals = list(pool.map(_worker_energy, genomes, chunksize=max(1, len(genomes) // (4 * workers))))
        else:
            vals = [compiled.energy(g, h) for g in genomes]
        if any(not np.isfinite(e) for e in vals):
            raise ArithmeticError("non-finite candidate energy (simulator fault)")
        return vals

    population = [
        ansatz_mod.random_genome(tpl, _keyed_rng(cfg.seed, 0, i, _INIT))
        for i in range(cfg.population_size)
    ]

    history: list[IterationRecord] = []
    best_series: list[float] = []
    try:
        for k in range(cfg.max_iterations + 1):
            energies = energies_of(population)
            ranked = select(list(zip(population, energies)))
            best_genome, best_energy = ranked[0]
            best_series.append(best_energy)

            best_overlap = err = None
            if reference is not None:
                best_overlap = statevec.overlap(
                    compiled.prepare_state(best_genome), reference.ground_vector
                )
                err = error_metric(best_energy, reference.ground_energy)
            history.append(
                IterationRecord(
                    iteration=k,
                    best_energy=best_energy,
                    population_mean_energy=float(np.mean(energies)),
                    best_overlap=best_overlap,
                    error_vs_reference=err,
                )
            )

            if cfg.stop_error is not None and err is not None and err < cfg.stop_error:
                stop = StopReason.ERROR_THRESHOLD
                break
            if (
                cfg.rate_change_window is not None
                and k >= cfg.rate_change_window
                and best_series[k - cfg.rate_change_window] != 0
                and abs(
                    (best_series[k - cfg.rate_change_window] - best_energy)
                    / best_series[k - cfg.rate_change_window]
                )
                < cfg.rate_change_threshold
            ):
                stop = StopReason.RATE_CHANGE
                break
            if k == cfg.max_iterations:
                stop = StopReason.MAX_ITERATIONS
                break

            # survivors paired top-to-bottom; children refill the second half
            # (with an odd survivor count the last one pairs back with the best)
            children: list[Genome] = []
            pairs = [(2 * i, 2 * i + 1) for i in range(len(ranked) // 2)]
            if len(ranked) % 2:
                pairs.append((len(ranked) - 1, 0))
            for pair_idx, (a, b) in enumerate(pairs):
                c1, c2 = crossover(
                    ranked[a][0], ranked[b][0], _keyed_rng(cfg.seed, k, pair_idx, _CROSS)
                )
                children += [c1, c2]
            population = [g for g, _ in ranked] + children[: len(ranked)]
            for i in range(len(population)):
                if cfg.elitism and i == 0:
                    continue
                population[i] = mutate(
                    population[i], k, cfg, _keyed_rng(cfg.seed, k, i, _MUTATE), tpl.t2_bounds_ns
                )
    finally:
        if pool is not None:
            pool.shutdown()

    return GAResult(
        best_genome=best_genome,
        best_energy=best_energy,
        history=tuple(history),
        stop_reason=stop,
    )


def write_history_csv(result: GAResult, path) -> None:
    """Convergence trace: iteration, best energy, error, overlap, mean."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["iteration", "best_energy", "error", "overlap", "mean_energy"])
        for r in result.history:
            w.writerow(
                [
                    r.iteration,
                    repr(r.best_energy),
                    "" if r.error_vs_reference is None else repr(r.error_vs_reference),
                    "" if r.best_overlap is None else repr(r.best_overlap),
                    repr(r.population_mean_energy),
                ]
            )


def save_result_json(result: GAResult, path) -> None:
    Path(path).write_text(json.dumps(result.to_json_dict(), indent=2) + "\n")
