"""Digital-analog quantum genetic algorithm on an emulated Rydberg-atom array.

Statevector-level emulation of registers of neutral atoms driven by square
global pulses, a fixed-structure digital-analog ansatz, an elitist genetic
search for molecular ground-state energies, and a coherent-noise comparison
of global analog blocks against digital CNOT chains.
"""
from importlib import resources

from .ansatz import AnalogBlock, AnsatzTemplate, CompiledAnsatz, Genome, Rotation
from .genetic import GAConfig, GAResult, IterationRecord, StopReason
from .noise import AnalogNoiseModel, DigitalNoiseModel, FidelityEstimate
from .pauli import PauliHamiltonian, PauliTerm, SpectralResult
from .pulse import PulseEntry, PulseSchedule
from .rydberg import AnalogParams, DeviceConfig, Register
from .statevec import StateVector

__version__ = "0.1.0"

CORPUS_FILES = ("h2_1.5A.ham", "lih_1.5A.ham", "beh2_1.5A.ham")


def corpus_path(name: str):
    """Filesystem path of a shipped molecular Hamiltonian file."""
    return resources.files(__name__) / "data" / name
