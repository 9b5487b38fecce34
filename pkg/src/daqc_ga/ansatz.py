"""Fixed-structure digital-analog ansatz and its energy evaluation.

Circuit layout (per candidate, declared here as the artifact's contract):

    RX(rx[q]) each qubit -> RY(ry[q]) each qubit -> analog block 1 (fixed)
    -> RZ(rz[q]) each qubit -> analog block 2 (free duration t2)
    -> RZ(rz[q]) each qubit (same angles as before)

Block 1 uses omega = delta = phi = pi/2 (rad/us, rad) for 50 ns on every
candidate; block 2 uses omega = delta = phi = pi with a per-candidate
duration.  The initial state is |0...0>.

``compile_template`` caches the block-1 unitary and the block-2 eigensystem,
so evaluating a candidate only costs rotations, eigenphases, and one
expectation value.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import pi
from pathlib import Path
from typing import Union

import numpy as np

from . import pauli, rydberg, statevec
from .pauli import PauliHamiltonian
from .rydberg import AnalogParams, DeviceConfig, Register
from .statevec import StateVector

DEFAULT_BLOCK1 = AnalogParams(omega=pi / 2, delta=pi / 2, phi=pi / 2, duration_ns=50.0)
DEFAULT_BLOCK2_BASE = AnalogParams(omega=pi, delta=pi, phi=pi, duration_ns=0.0)
DEFAULT_T2_BOUNDS_NS = (0.0, 800.0)


@dataclass(frozen=True)
class AnsatzTemplate:
    """Everything fixed across candidates of one run."""

    n_qubits: int
    register: Register
    device: DeviceConfig
    block1: AnalogParams = DEFAULT_BLOCK1
    block2_base: AnalogParams = DEFAULT_BLOCK2_BASE
    t2_bounds_ns: tuple[float, float] = DEFAULT_T2_BOUNDS_NS

    def __post_init__(self):
        if self.register.n_atoms != self.n_qubits:
            raise ValueError(
                f"register has {self.register.n_atoms} atoms, template wants {self.n_qubits}"
            )
        lo, hi = self.t2_bounds_ns
        if not (0 <= lo < hi):
            raise ValueError(f"bad t2 bounds {self.t2_bounds_ns}")


def default_template(n_qubits: int, device: DeviceConfig = DeviceConfig(), register: Register | None = None) -> AnsatzTemplate:
    if register is None:
        register = rydberg.ring_register(n_qubits, device.default_spacing)
    return AnsatzTemplate(n_qubits=n_qubits, register=register, device=device)


@dataclass(frozen=True)
class Genome:
    """Free parameters of one candidate circuit."""

    rx: tuple[float, ...]
    ry: tuple[float, ...]
    rz: tuple[float, ...]
    t2_ns: float

    def __post_init__(self):
        if not (len(self.rx) == len(self.ry) == len(self.rz)):
            raise ValueError("rx, ry, rz must have equal length")

    @property
    def n_qubits(self) -> int:
        return len(self.rx)

    def to_json_dict(self) -> dict:
        return {"rx": list(self.rx), "ry": list(self.ry), "rz": list(self.rz), "t2_ns": self.t2_ns}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Genome":
        return cls(tuple(d["rx"]), tuple(d["ry"]), tuple(d["rz"]), float(d["t2_ns"]))


def save_genome(g: Genome, path) -> None:
    Path(path).write_text(json.dumps(g.to_json_dict(), indent=2) + "\n")


def load_genome(path) -> Genome:
    return Genome.from_json_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class Rotation:
    qubit: int
    axis: str
    angle: float


@dataclass(frozen=True)
class AnalogBlock:
    params: AnalogParams


CircuitOp = Union[Rotation, AnalogBlock]


def build_circuit(g: Genome, tpl: AnsatzTemplate) -> list[CircuitOp]:
    """Ordered operation list for one candidate (see module docstring)."""
    if g.n_qubits != tpl.n_qubits:
        raise ValueError(f"genome has {g.n_qubits} qubits, template {tpl.n_qubits}")
    n = tpl.n_qubits
    ops: list[CircuitOp] = []
    ops += [Rotation(q, "X", g.rx[q]) for q in range(n)]
    ops += [Rotation(q, "Y", g.ry[q]) for q in range(n)]
    ops.append(AnalogBlock(tpl.block1))
    ops += [Rotation(q, "Z", g.rz[q]) for q in range(n)]
    ops.append(AnalogBlock(tpl.block2_base.with_duration(g.t2_ns)))
    ops += [Rotation(q, "Z", g.rz[q]) for q in range(n)]
    return ops


class CompiledAnsatz:
    """Template with precomputed analog-block spectra for fast evaluation."""

    def __init__(self, tpl: AnsatzTemplate):
        self.template = tpl
        self.block1_unitary = rydberg.evolution_unitary(tpl.register, tpl.block1, tpl.device)
        self._b2_vals, self._b2_vecs = rydberg.hamiltonian_eigensystem(
            tpl.register, tpl.block2_base, tpl.device
        )

    def block2_unitary(self, duration_ns: float) -> np.ndarray:
        return rydberg.unitary_from_eigensystem(self._b2_vals, self._b2_vecs, duration_ns)

    def prepare_state(self, g: Genome) -> StateVector:
        tpl = self.template
        psi = statevec.zero_state(tpl.n_qubits)
        for q in range(tpl.n_qubits):
            psi = statevec.apply_rotation(psi, q, "X", g.rx[q])
        for q in range(tpl.n_qubits):
            psi = statevec.apply_rotation(psi, q, "Y", g.ry[q])
        psi = statevec.apply_dense_unitary(psi, self.block1_unitary, check=False)
        for q in range(tpl.n_qubits):
            psi = statevec.apply_rotation(psi, q, "Z", g.rz[q])
        psi = statevec.apply_dense_unitary(psi, self.block2_unitary(g.t2_ns), check=False)
        for q in range(tpl.n_qubits):
            psi = statevec.apply_rotation(psi, q, "Z", g.rz[q])
        return psi

    def energy(self, g: Genome, h: PauliHamiltonian) -> float:
        return pauli.expectation(h, self.prepare_state(g))


def compile_template(tpl: AnsatzTemplate) -> CompiledAnsatz:
    return CompiledAnsatz(tpl)


def evaluate(g: Genome, tpl: AnsatzTemplate, h: PauliHamiltonian) -> float:
    """<psi(g)|H|psi(g)>; deterministic, convenience path without caching."""
    if h.n_qubits != tpl.n_qubits:
        raise ValueError(f"Hamiltonian has {h.n_qubits} qubits, template {tpl.n_qubits}")
    return CompiledAnsatz(tpl).energy(g, h)


def random_genome(tpl: AnsatzTemplate, rng: np.random.Generator) -> Genome:
    """Angles uniform on [0, 2*pi); t2 uniform within the template bounds."""
    n = tpl.n_qubits
    lo, hi = tpl.t2_bounds_ns
    return Genome(
        rx=tuple(rng.uniform(0, 2 * pi, n)),
        ry=tuple(rng.uniform(0, 2 * pi, n)),
        rz=tuple(rng.uniform(0, 2 * pi, n)),
        t2_ns=float(rng.uniform(lo, hi)),
    )
