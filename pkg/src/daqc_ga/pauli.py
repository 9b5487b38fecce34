"""Weighted Pauli-string Hamiltonians: parsing, expectation values, exact
diagonalization.

The text grammar accepts signed terms like ``-0.6569 + 0.1291 Z1 - 0.0042
Z0 Z1``; factors may also be written adjacently (``Z0Z1``) and terms may
continue across line breaks.  ``.ham`` files carry a ``qubits: <n>`` header
line before the expression.

Hamiltonians are canonicalized on construction (factors sorted by qubit,
duplicate strings merged by coefficient addition), so equality of parsed
values is plain dataclass equality.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .statevec import StateVector, apply_matrix_1q

DENSE_QUBIT_CAP = 12

PAULI_MATRICES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class HamiltonianParseError(ValueError):
    """Malformed Hamiltonian text; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string; an empty factor list is a multiple of I."""

    coefficient: float
    factors: tuple[tuple[int, str], ...]

    def __post_init__(self):
        qubits = [q for q, _ in self.factors]
        if any(q1 >= q2 for q1, q2 in zip(qubits, qubits[1:])):
            raise ValueError(f"factors must have strictly increasing qubit indices: {self.factors}")
        for q, axis in self.factors:
            if axis not in PAULI_MATRICES:
                raise ValueError(f"unknown Pauli axis {axis!r}")
            if q < 0:
                raise ValueError(f"negative qubit index {q}")


@dataclass(frozen=True)
class PauliHamiltonian:
    """Real-weighted sum of Pauli strings on a fixed qubit count."""

    n_qubits: int
    terms: tuple[PauliTerm, ...]

    def __post_init__(self):
        seen = set()
        for t in self.terms:
            if t.factors in seen:
                raise ValueError(f"duplicate term {t.factors}; merge before construction")
            seen.add(t.factors)
            for q, _ in t.factors:
                if q >= self.n_qubits:
                    raise ValueError(f"qubit index {q} >= n_qubits {self.n_qubits}")

    @property
    def n_terms(self) -> int:
        return len(self.terms)


def _make_hamiltonian(n_qubits: int, raw_terms: list[tuple[float, tuple[tuple[int, str], ...]]]) -> PauliHamiltonian:
    """Merge duplicate factor lists (first-appearance order) and build."""
    order: list[tuple[tuple[int, str], ...]] = []
    accum: dict[tuple, float] = {}
    for coeff, factors in raw_terms:
        if factors not in accum:
            order.append(factors)
            accum[factors] = 0.0
        accum[factors] += coeff
    terms = tuple(PauliTerm(accum[f], f) for f in order)
    return PauliHamiltonian(n_qubits, terms)


_TOKEN = re.compile(r"\s*(?:(?P<sign>[+-])|(?P<coeff>\d+\.?\d*(?:[eE][+-]?\d+)?)|(?P<factor>[XYZ]\s*\d+))")


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def parse_hamiltonian(text: str, n_qubits: int) -> PauliHamiltonian:
    """Parse a signed-term Pauli expression into a canonical Hamiltonian."""
    # normalize the unicode minus that appears in transcribed sources
    text = text.replace("−", "-")
    raw_terms: list[tuple[float, tuple[tuple[int, str], ...]]] = []
    pos = 0
    sign = 1.0
    pending_sign = False
    coeff: Optional[float] = None
    factors: list[tuple[int, str]] = []

    def flush(at: int):
        nonlocal coeff, factors, sign
        if coeff is None:
            return
        fs = sorted(factors, key=lambda f: f[0])
        qs = [q for q, _ in fs]
        if len(set(qs)) != len(qs):
            dup = next(q for i, q in enumerate(qs) if q in qs[:i])
            raise HamiltonianParseError(f"duplicate qubit {dup} within one term", *_line_col(text, at))
        for q, _ in fs:
            if q >= n_qubits:
                raise HamiltonianParseError(f"qubit index {q} >= n_qubits {n_qubits}", *_line_col(text, at))
        raw_terms.append((sign * coeff, tuple(fs)))
        coeff, factors, sign = None, [], 1.0

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if not text[pos:].strip():
                break
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise HamiltonianParseError(f"unexpected token {text[bad:bad + 8]!r}", *_line_col(text, bad))
        if m.group("sign"):
            flush(m.start())
            if pending_sign:
                raise HamiltonianParseError("consecutive signs", *_line_col(text, m.start()))
            sign = -1.0 if m.group("sign") == "-" else 1.0
            pending_sign = True
        elif m.group("coeff"):
            if coeff is not None:
                flush(m.start())
            coeff = float(m.group("coeff"))
            pending_sign = False
        else:
            tok = m.group("factor").replace(" ", "")
            if coeff is None:
                raise HamiltonianParseError(
                    f"factor {tok!r} without a preceding coefficient", *_line_col(text, m.start())
                )
            factors.append((int(tok[1:]), tok[0]))
        pos = m.end()
    if pending_sign:
        raise HamiltonianParseError("dangling sign at end of input", *_line_col(text, len(text) - 1))
    flush(len(text) - 1)
    if not raw_terms:
        raise HamiltonianParseError("empty Hamiltonian expression", 1, 1)
    return _make_hamiltonian(n_qubits, raw_terms)


def serialize_hamiltonian(h: PauliHamiltonian) -> str:
    """Signed-term text that re-parses to an equal Hamiltonian."""
    parts = []
    for i, t in enumerate(h.terms):
        sign = "-" if t.coefficient < 0 else "+"
        body = repr(abs(t.coefficient))
        if t.factors:
            body += " " + " ".join(f"{axis}{q}" for q, axis in t.factors)
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def load_ham_file(path) -> PauliHamiltonian:
    """Read a ``.ham`` file: ``qubits: <n>`` header, then the expression."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise HamiltonianParseError("empty file", 1, 1)
    m = re.fullmatch(r"\s*qubits:\s*(\d+)\s*", lines[0])
    if m is None:
        raise HamiltonianParseError("first line must be 'qubits: <n>'", 1, 1)
    n = int(m.group(1))
    return parse_hamiltonian("\n".join(lines[1:]), n)


def save_ham_file(h: PauliHamiltonian, path) -> None:
    Path(path).write_text(f"qubits: {h.n_qubits}\n{serialize_hamiltonian(h)}\n")


def expectation(h: PauliHamiltonian, psi: StateVector) -> float:
    """<psi|H|psi>; real because coefficients are real and strings Hermitian."""
    if psi.n_qubits != h.n_qubits:
        raise ValueError(f"state has {psi.n_qubits} qubits, Hamiltonian {h.n_qubits}")
    total = 0.0 + 0.0j
    for t in h.terms:
        amps = psi.amplitudes
        for q, axis in t.factors:
            amps = apply_matrix_1q(amps, PAULI_MATRICES[axis], q, h.n_qubits)
        total += t.coefficient * np.vdot(psi.amplitudes, amps)
    if abs(total.imag) > 1e-9:
        raise ArithmeticError(f"expectation has imaginary residue {total.imag:.2e}")
    return float(total.real)


def to_dense_matrix(h: PauliHamiltonian, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Full 2^n x 2^n Hermitian matrix; little-endian tensor ordering."""
    if h.n_qubits > cap:
        raise ValueError(f"n_qubits {h.n_qubits} exceeds dense cap {cap}")
    dim = 2**h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for t in h.terms:
        m = np.array([[1.0]], dtype=complex)
        fac = dict(t.factors)
        for q in reversed(range(h.n_qubits)):
            m = np.kron(m, PAULI_MATRICES.get(fac.get(q, "I"), np.eye(2)))
        out += t.coefficient * m
    return out


@dataclass(frozen=True)
class SpectralResult:
    """Ground pair from exact dense diagonalization."""

    ground_energy: float
    ground_vector: StateVector
    full_spectrum: Optional[tuple[float, ...]] = field(default=None)


def ground_state(h: PauliHamiltonian, cap: int = DENSE_QUBIT_CAP, full_spectrum: bool = True) -> SpectralResult:
    """Dense Hermitian eigensolve; eigenvector is unit-normalized by eigh."""
    m = to_dense_matrix(h, cap=cap)
    vals, vecs = np.linalg.eigh(m)
    vec = StateVector(h.n_qubits, vecs[:, 0].astype(complex))
    spectrum = tuple(float(v) for v in vals) if full_spectrum else None
    return SpectralResult(float(vals[0]), vec, spectrum)
