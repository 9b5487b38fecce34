"""Shared fixtures and independent dense-matrix oracles.

The oracles here rebuild states and unitaries with plain numpy kron products
and scipy expm, deliberately avoiding the package's own evolution and
expectation code paths.
"""
import numpy as np
import pytest
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
N_OP = (I2 - Z) / 2
PAULIS = {"X": X, "Y": Y, "Z": Z}


def embed_1q(m: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Little-endian embedding: qubit 0 is the last kron factor."""
    out = np.array([[1.0]], dtype=complex)
    for k in reversed(range(n)):
        out = np.kron(out, m if k == qubit else I2)
    return out


def rotation_matrix_oracle(axis: str, angle: float) -> np.ndarray:
    return expm(-0.5j * angle * PAULIS[axis])


def rydberg_hamiltonian_oracle(coords, omega, delta, phi, c6) -> np.ndarray:
    """Dense pulse generator built purely from kron products."""
    coords = np.asarray(coords, dtype=float)
    n = coords.shape[0]
    h = np.zeros((2**n, 2**n), dtype=complex)
    drive = (omega / 2) * (np.cos(phi) * X - np.sin(phi) * Y)
    for q in range(n):
        h += embed_1q(drive, q, n) - delta * embed_1q(N_OP, q, n)
    for i in range(n):
        for j in range(i):
            r = np.linalg.norm(coords[i] - coords[j])
            h += (c6 / r**6) * embed_1q(N_OP, i, n) @ embed_1q(N_OP, j, n)
    return h


def evolution_oracle(coords, omega, delta, phi, c6, duration_ns) -> np.ndarray:
    h = rydberg_hamiltonian_oracle(coords, omega, delta, phi, c6)
    return expm(-1j * h * duration_ns * 1e-3)


@pytest.fixture(scope="session")
def h2():
    import daqc_ga
    from daqc_ga import pauli

    return pauli.load_ham_file(daqc_ga.corpus_path("h2_1.5A.ham"))


@pytest.fixture(scope="session")
def lih():
    import daqc_ga
    from daqc_ga import pauli

    return pauli.load_ham_file(daqc_ga.corpus_path("lih_1.5A.ham"))


@pytest.fixture(scope="session")
def beh2():
    import daqc_ga
    from daqc_ga import pauli

    return pauli.load_ham_file(daqc_ga.corpus_path("beh2_1.5A.ham"))
