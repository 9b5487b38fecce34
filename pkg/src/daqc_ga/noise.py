"""Coherent-error model, Monte-Carlo average gate fidelity, and the digital
CNOT-chain baseline.

Analog noise draws, per pulse: a multiplicative Rabi factor N(1, 0.01), an
additive detuning shift N(0, 0.6 rad/us), and an independent Gaussian offset
N(0, 0.1 um) on every atom coordinate axis.  Single-qubit gates are treated
as noiseless.  The digital baseline models each CNOT as Hadamard - CPHASE -
Hadamard on the target, with the CPHASE angle drawn from N(pi, sigma^2) and
sigma calibrated so one noisy CNOT averages a chosen fidelity.

The Haar state average of the fidelity integrand is taken in closed form,

    F(U, U~) = (d + |Tr(U^dag U~)|^2) / (d + d^2),

so only the noise integral is sampled (500 draws by default).  Estimator RNG
streams are keyed by (seed, sample index): totals do not depend on how
samples are scheduled across workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt
from typing import Optional

import numpy as np

from .rydberg import AnalogParams, DeviceConfig, Register, evolution_unitary

DEFAULT_N_SAMPLES = 500


@dataclass(frozen=True)
class AnalogNoiseModel:
    rabi_rel_sd: float = 0.01
    detuning_sd: float = 0.6  # rad/us
    position_sd: float = 0.1  # um per axis

    def __post_init__(self):
        if min(self.rabi_rel_sd, self.detuning_sd, self.position_sd) < 0:
            raise ValueError("noise standard deviations must be >= 0")

    @property
    def is_zero(self) -> bool:
        return self.rabi_rel_sd == self.detuning_sd == self.position_sd == 0


@dataclass(frozen=True)
class DigitalNoiseModel:
    cphase_angle_mean: float = pi
    cphase_angle_sd: float = 0.0  # set by calibration

    def __post_init__(self):
        if self.cphase_angle_sd < 0:
            raise ValueError("cphase_angle_sd must be >= 0")


@dataclass(frozen=True)
class FidelityEstimate:
    mean: float
    std_error: float
    n_samples: int


def avg_gate_fidelity(u: np.ndarray, u_tilde: np.ndarray) -> float:
    """Haar-average fidelity between two unitaries of equal dimension."""
    if u.shape != u_tilde.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"shape mismatch: {u.shape} vs {u_tilde.shape}")
    d = u.shape[0]
    tr = np.trace(u.conj().T @ u_tilde)
    return float((d + abs(tr) ** 2) / (d + d * d))


def sample_noisy_analog_unitary(
    reg: Register,
    p: AnalogParams,
    dev: DeviceConfig,
    nm: AnalogNoiseModel,
    rng: np.random.Generator,
    max_retries: int = 100,
) -> np.ndarray:
    """One coherent-noise draw of the global pulse unitary."""
    for _ in range(max_retries):
        omega = p.omega * rng.normal(1.0, nm.rabi_rel_sd)
        delta = p.delta + rng.normal(0.0, nm.detuning_sd)
        coords = reg.coordinates + rng.normal(0.0, nm.position_sd, reg.coordinates.shape)
        n = coords.shape[0]
        if n > 1:
            diff = coords[:, None, :] - coords[None, :, :]
            dmin = np.min(np.linalg.norm(diff, axis=-1)[np.triu_indices(n, 1)])
            if dmin <= 1e-9:
                continue
        noisy_reg = Register(coords)
        noisy_p = AnalogParams(omega, delta, p.phi, p.duration_ns)
        return evolution_unitary(noisy_reg, noisy_p, dev)
    raise RuntimeError("perturbed atoms kept coinciding; position_sd is implausibly large")


def _mc_estimate(samples: np.ndarray) -> FidelityEstimate:
    n = len(samples)
    se = float(np.std(samples, ddof=1) / sqrt(n)) if n > 1 else 0.0
    return FidelityEstimate(float(np.mean(samples)), se, n)


def estimate_analog_fidelity(
    reg: Register,
    p: AnalogParams,
    dev: DeviceConfig,
    nm: AnalogNoiseModel,
    n_samples: int = DEFAULT_N_SAMPLES,
    seed: int = 0,
) -> FidelityEstimate:
    """Monte-Carlo mean fidelity of the noisy pulse against the ideal one."""
    if n_samples < 2:
        raise ValueError(f"need at least 2 samples, got {n_samples}")
    if nm.is_zero:
        # exact fixed point: no noise means no infidelity, skip the sampling
        return FidelityEstimate(1.0, 0.0, n_samples)
    ideal = evolution_unitary(reg, p, dev)
    fids = np.empty(n_samples)
    for i in range(n_samples):
        rng = np.random.default_rng([seed, i])
        fids[i] = avg_gate_fidelity(ideal, sample_noisy_analog_unitary(reg, p, dev, nm, rng))
    return _mc_estimate(fids)


def _embed_1q(m: np.ndarray, qubit: int, n: int) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for k in reversed(range(n)):
        out = np.kron(out, m if k == qubit else np.eye(2))
    return out


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2)


def _cphase(n: int, a: int, b: int, angle: float) -> np.ndarray:
    idx = np.arange(2**n)
    both = ((idx >> a) & 1) & ((idx >> b) & 1)
    return np.diag(np.where(both, np.exp(1j * angle), 1.0))


def cnot_chain_unitary(n: int, angles) -> np.ndarray:
    """Chain of n-1 CNOT constructions H_t CPHASE(angle) H_t on pairs
    (0,1), (1,2), ..., control on the lower index."""
    angles = list(angles)
    if n < 2:
        raise ValueError(f"chain needs n >= 2 qubits, got {n}")
    if len(angles) != n - 1:
        raise ValueError(f"expected {n - 1} angles, got {len(angles)}")
    u = np.eye(2**n, dtype=complex)
    for k, angle in enumerate(angles):
        h_t = _embed_1q(_HADAMARD, k + 1, n)
        u = h_t @ _cphase(n, k, k + 1, angle) @ h_t @ u
    return u


def _single_cnot_trace_affine() -> tuple[complex, complex]:
    """Tr(CNOT^dag U(phi)) = a + b e^{i phi}: U(phi) is affine in e^{i phi}
    because CPHASE(phi) = P0 + e^{i phi} P1."""
    n = 2
    ideal = cnot_chain_unitary(n, [pi])
    h_t = _embed_1q(_HADAMARD, 1, n)
    idx = np.arange(4)
    both = (((idx >> 0) & 1) & ((idx >> 1) & 1)).astype(float)
    m0 = h_t @ np.diag(1.0 - both).astype(complex) @ h_t
    m1 = h_t @ np.diag(both).astype(complex) @ h_t
    a = complex(np.trace(ideal.conj().T @ m0))
    b = complex(np.trace(ideal.conj().T @ m1))
    return a, b


def calibrate_cphase_sigma(
    target_fidelity: float,
    n_samples: int = 200_000,
    seed: int = 0,
    tol: float = 1e-4,
) -> float:
    """Bisect sigma until the Monte-Carlo single-CNOT fidelity hits the target.

    Common random numbers (one fixed batch of standard-normal draws) make the
    objective monotone in sigma, so bisection is well-posed.
    """
    if not 0 < target_fidelity < 1:
        raise ValueError(f"target fidelity must be in (0, 1), got {target_fidelity}")
    z = np.random.default_rng([seed]).standard_normal(n_samples)
    a, b = _single_cnot_trace_affine()
    d = 4

    def mean_fidelity(sigma: float) -> float:
        tr = a + b * np.exp(1j * (pi + sigma * z))  # noisy angle is pi + sigma z
        return float(np.mean((d + np.abs(tr) ** 2) / (d + d * d)))

    lo, hi = 0.0, 2.0
    if mean_fidelity(hi) > target_fidelity:
        raise ValueError(f"target {target_fidelity} unreachable within sigma bracket (0, {hi}]")
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if mean_fidelity(mid) > target_fidelity:
            lo = mid
        else:
            hi = mid
    sigma = 0.5 * (lo + hi)
    residual = abs(mean_fidelity(sigma) - target_fidelity)
    if residual > tol:
        raise ArithmeticError(f"calibration residual {residual:.2e} exceeds tolerance {tol}")
    return sigma


def estimate_digital_fidelity(
    n: int,
    dnm: DigitalNoiseModel,
    n_samples: int = DEFAULT_N_SAMPLES,
    seed: int = 0,
) -> FidelityEstimate:
    """Monte-Carlo fidelity of the n-qubit CNOT chain with independently
    noisy CPHASE angles."""
    if n < 2:
        raise ValueError(f"chain needs n >= 2 qubits, got {n}")
    if dnm.cphase_angle_sd == 0:
        return FidelityEstimate(1.0, 0.0, n_samples)
    ideal = cnot_chain_unitary(n, [dnm.cphase_angle_mean] * (n - 1))
    fids = np.empty(n_samples)
    for i in range(n_samples):
        rng = np.random.default_rng([seed, i])
        angles = rng.normal(dnm.cphase_angle_mean, dnm.cphase_angle_sd, n - 1)
        fids[i] = avg_gate_fidelity(ideal, cnot_chain_unitary(n, angles))
    return _mc_estimate(fids)


@dataclass(frozen=True)
class SweepRow:
    sweep_var: float
    analog_mean: float
    analog_se: float
    digital_mean: float
    digital_se: float


@dataclass(frozen=True)
class SweepResult:
    time_rows: tuple[SweepRow, ...]
    qubit_rows: tuple[SweepRow, ...]
    calibrated_sigma: float
    crossing_time_ns: Optional[float]
    crossing_bracket_ns: Optional[tuple[float, float]]
    n_samples: int
    seed: int


def _crossing(rows: tuple[SweepRow, ...]) -> tuple[Optional[float], Optional[tuple[float, float]]]:
    """First sign change of (analog - digital), linearly interpolated."""
    for r0, r1 in zip(rows, rows[1:]):
        g0 = r0.analog_mean - r0.digital_mean
        g1 = r1.analog_mean - r1.digital_mean
        if g0 >= 0 > g1:
            frac = g0 / (g0 - g1)
            t = r0.sweep_var + frac * (r1.sweep_var - r0.sweep_var)
            return t, (r0.sweep_var, r1.sweep_var)
    return None, None


def fidelity_sweeps(
    build_register,
    p: AnalogParams,
    dev: DeviceConfig,
    nm: AnalogNoiseModel,
    time_grid_ns,
    qubit_grid,
    fixed_time_ns: float = 250.0,
    sweep_n_qubits: int = 6,
    target_cnot_fidelity: float = 0.99,
    n_samples: int = DEFAULT_N_SAMPLES,
    calibration_samples: int = 200_000,
    seed: int = 0,
) -> SweepResult:
    """Fidelity-vs-time sweep at fixed qubit count and fidelity-vs-qubits
    sweep at fixed time, with a calibrated digital CNOT-chain baseline.

    ``build_register(n)`` supplies the atom geometry per qubit count.
    """
    if nm.is_zero:
        sigma = 0.0
    else:
        sigma = calibrate_cphase_sigma(target_cnot_fidelity, calibration_samples, seed=seed)
    dnm = DigitalNoiseModel(cphase_angle_sd=sigma)

    def analog_at(n_qubits: int, t_ns: float, stream: int) -> FidelityEstimate:
        reg = build_register(n_qubits)
        if nm.is_zero:
            return FidelityEstimate(1.0, 0.0, n_samples)
        return estimate_analog_fidelity(
            reg, p.with_duration(t_ns), dev, nm, n_samples, seed=seed + stream
        )

    def digital_at(n_qubits: int, stream: int) -> FidelityEstimate:
        if nm.is_zero:
            return FidelityEstimate(1.0, 0.0, n_samples)
        return estimate_digital_fidelity(n_qubits, dnm, n_samples, seed=seed + stream)

    dig_fixed = digital_at(sweep_n_qubits, stream=1)
    time_rows = []
    for i, t in enumerate(time_grid_ns):
        ana = analog_at(sweep_n_qubits, float(t), stream=2 + i)
        time_rows.append(
            SweepRow(float(t), ana.mean, ana.std_error, dig_fixed.mean, dig_fixed.std_error)
        )
    time_rows = tuple(time_rows)
    qubit_rows = []
    for i, n in enumerate(qubit_grid):
        ana = analog_at(int(n), fixed_time_ns, stream=1000 + i)
        dig = digital_at(int(n), stream=2000 + i)
        qubit_rows.append(
            SweepRow(float(n), ana.mean, ana.std_error, dig.mean, dig.std_error)
        )
    qubit_rows = tuple(qubit_rows)
    t_cross, bracket = _crossing(time_rows)
    return SweepResult(
        time_rows=time_rows,
        qubit_rows=qubit_rows,
        calibrated_sigma=sigma,
        crossing_time_ns=t_cross,
        crossing_bracket_ns=bracket,
        n_samples=n_samples,
        seed=seed,
    )
