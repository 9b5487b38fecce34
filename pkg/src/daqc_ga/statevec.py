"""Dense complex statevector and single-qubit rotation gates.

Bit convention (shared by every module): basis index ``i`` is little-endian,
qubit ``q`` lives in bit ``q`` of ``i``.  ``Z_q`` gives +1 on bit value 0.
Rotations follow R_A(theta) = exp(-i theta A / 2).

All operations are pure: they return a new StateVector and never modify the
input, so candidate states can be evolved concurrently without locking.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import cos, sin

import numpy as np

MAX_QUBITS = 12

_ROTATIONS = {
    "X": lambda t: np.array(
        [[cos(t / 2), -1j * sin(t / 2)], [-1j * sin(t / 2), cos(t / 2)]], dtype=complex
    ),
    "Y": lambda t: np.array(
        [[cos(t / 2), -sin(t / 2)], [sin(t / 2), cos(t / 2)]], dtype=complex
    ),
    "Z": lambda t: np.array(
        [[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=complex
    ),
}


@dataclass(frozen=True)
class StateVector:
    """2^n complex amplitudes in the little-endian computational basis."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes, got {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def zero_state(n: int) -> StateVector:
    """All qubits in |0>."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count {n} outside [1, {MAX_QUBITS}]")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


def basis_state(n: int, index: int) -> StateVector:
    """Computational basis state |index> (little-endian)."""
    if not 0 <= index < 2**n:
        raise ValueError(f"basis index {index} out of range for {n} qubits")
    amps = np.zeros(2**n, dtype=complex)
    amps[index] = 1.0
    return StateVector(n, amps)


def apply_matrix_1q(amps: np.ndarray, matrix: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Apply a 2x2 matrix to one qubit of a flat amplitude array."""
    # reshape puts qubit n-1 on axis 0, so qubit q is axis n-1-q
    axis = n - 1 - qubit
    t = amps.reshape([2] * n)
    t = np.moveaxis(t, axis, -1)
    t = t @ matrix.T
    return np.moveaxis(t, -1, axis).reshape(-1)


def apply_rotation(psi: StateVector, qubit: int, axis: str, angle: float) -> StateVector:
    """R_axis(angle) = exp(-i angle axis / 2) on one qubit."""
    if not 0 <= qubit < psi.n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {psi.n_qubits}-qubit state")
    if axis not in _ROTATIONS:
        raise ValueError(f"unknown rotation axis {axis!r}")
    new = apply_matrix_1q(psi.amplitudes, _ROTATIONS[axis](angle), qubit, psi.n_qubits)
    return StateVector(psi.n_qubits, new)


def overlap(a: StateVector, b: StateVector) -> float:
    """|<a|b>|, symmetric and global-phase invariant."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


def apply_dense_unitary(psi: StateVector, u: np.ndarray, check: bool = True) -> StateVector:
    """Apply a full 2^n x 2^n unitary to the state."""
    if u.shape != (psi.dim, psi.dim):
        raise ValueError(f"unitary shape {u.shape} does not match dimension {psi.dim}")
    if check:
        err = np.max(np.abs(u.conj().T @ u - np.eye(psi.dim)))
        if err > 1e-9:
            raise ValueError(f"matrix is not unitary (deviation {err:.2e})")
    return StateVector(psi.n_qubits, u @ psi.amplitudes)
