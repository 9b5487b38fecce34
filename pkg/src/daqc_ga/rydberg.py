"""Rydberg-array effective Hamiltonian and square-pulse analog evolution.

A global pulse (omega, delta, phi, duration) drives every atom identically:

    H = sum_i [ (omega/2)(cos(phi) X_i - sin(phi) Y_i) - delta N_i ]
        + sum_{j<i} (c6 / r_ij^6) N_i N_j

with N = (I - Z)/2 projecting onto the Rydberg-occupied state |1>.  omega and
delta are in rad/us, phi in rad, coordinates in um, durations in ns at every
interface (converted to us internally).  Evolution uses the Hermitian
eigendecomposition U = V exp(-i L t) V^dag, which is exactly unitary at these
dimensions.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, sin
from pathlib import Path

import numpy as np

from .statevec import MAX_QUBITS, StateVector, apply_dense_unitary

# rad us^-1 um^6; device data, overridable in every config
DEFAULT_C6 = 5_420_158.53
DEFAULT_SPACING_UM = 8.0


@dataclass(frozen=True)
class Register:
    """Atom coordinates in um, one row per atom (2D or 3D)."""

    coordinates: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coordinates, dtype=float)
        if coords.ndim != 2 or coords.shape[1] not in (2, 3):
            raise ValueError(f"coordinates must be (n, 2) or (n, 3), got {coords.shape}")
        object.__setattr__(self, "coordinates", coords)
        if self.n_atoms > 1 and np.min(self.pairwise_distances()[np.triu_indices(self.n_atoms, 1)]) <= 0:
            raise ValueError("register contains coincident atoms")

    @property
    def n_atoms(self) -> int:
        return self.coordinates.shape[0]

    def pairwise_distances(self) -> np.ndarray:
        diff = self.coordinates[:, None, :] - self.coordinates[None, :, :]
        return np.linalg.norm(diff, axis=-1)


@dataclass(frozen=True)
class AnalogParams:
    """Square global pulse: omega, delta in rad/us, phi in rad, duration in ns."""

    omega: float
    delta: float
    phi: float
    duration_ns: float = 0.0

    def __post_init__(self):
        if self.duration_ns < 0:
            raise ValueError(f"duration must be >= 0, got {self.duration_ns}")

    def with_duration(self, duration_ns: float) -> "AnalogParams":
        return AnalogParams(self.omega, self.delta, self.phi, duration_ns)


@dataclass(frozen=True)
class DeviceConfig:
    c6: float = DEFAULT_C6
    default_spacing: float = DEFAULT_SPACING_UM

    def __post_init__(self):
        if self.c6 <= 0:
            raise ValueError(f"c6 must be positive, got {self.c6}")


def ring_register(n: int, spacing: float = DEFAULT_SPACING_UM) -> Register:
    """Atoms on a circle with nearest-neighbor chord = spacing (line for n <= 2)."""
    if n < 1:
        raise ValueError(f"need at least one atom, got {n}")
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    if n == 1:
        return Register(np.zeros((1, 2)))
    if n == 2:
        return Register(np.array([[0.0, 0.0], [spacing, 0.0]]))
    radius = spacing / (2 * sin(pi / n))
    angles = 2 * pi * np.arange(n) / n
    return Register(radius * np.column_stack([np.cos(angles), np.sin(angles)]))


def load_register(path) -> Register:
    """Read a ``.reg`` file: one ``x y [z]`` line per atom, in um."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#")[0].strip()
        if line:
            rows.append([float(v) for v in line.split()])
    if not rows:
        raise ValueError(f"no atom coordinates in {path}")
    return Register(np.array(rows))


def build_hamiltonian(reg: Register, p: AnalogParams, dev: DeviceConfig) -> np.ndarray:
    """Dense Hermitian generator of the global pulse, in rad/us."""
    n = reg.n_atoms
    if n > MAX_QUBITS:
        raise ValueError(f"register of {n} atoms exceeds cap {MAX_QUBITS}")
    dim = 2**n
    # occupancy of qubit q in each basis state (little-endian bits)
    occ = (np.arange(dim)[:, None] >> np.arange(n)[None, :]) & 1

    h = np.zeros((dim, dim), dtype=complex)
    drive = (p.omega / 2) * (
        cos(p.phi) * np.array([[0, 1], [1, 0]], dtype=complex)
        - sin(p.phi) * np.array([[0, -1j], [1j, 0]], dtype=complex)
    )
    for q in range(n):
        m = np.array([[1.0]], dtype=complex)
        for k in reversed(range(n)):
            m = np.kron(m, drive if k == q else np.eye(2))
        h += m

    diag = -p.delta * occ.sum(axis=1).astype(float)
    dist = reg.pairwise_distances()
    for i in range(n):
        for j in range(i):
            diag += (dev.c6 / dist[i, j] ** 6) * occ[:, i] * occ[:, j]
    h[np.diag_indices(dim)] += diag
    return h


def hamiltonian_eigensystem(reg: Register, p: AnalogParams, dev: DeviceConfig):
    """(eigenvalues, eigenvectors) of the pulse generator; cacheable when only
    the duration varies between evolutions."""
    vals, vecs = np.linalg.eigh(build_hamiltonian(reg, p, dev))
    return vals, vecs


def unitary_from_eigensystem(vals: np.ndarray, vecs: np.ndarray, duration_ns: float) -> np.ndarray:
    t_us = duration_ns * 1e-3
    phases = np.exp(-1j * vals * t_us)
    return (vecs * phases) @ vecs.conj().T


def evolution_unitary(reg: Register, p: AnalogParams, dev: DeviceConfig) -> np.ndarray:
    """U = exp(-i H t) for the square pulse (duration taken from ``p``)."""
    vals, vecs = hamiltonian_eigensystem(reg, p, dev)
    return unitary_from_eigensystem(vals, vecs, p.duration_ns)


def evolve(psi: StateVector, reg: Register, p: AnalogParams, dev: DeviceConfig) -> StateVector:
    if reg.n_atoms != psi.n_qubits:
        raise ValueError(f"register has {reg.n_atoms} atoms, state {psi.n_qubits} qubits")
    return apply_dense_unitary(psi, evolution_unitary(reg, p, dev), check=False)
