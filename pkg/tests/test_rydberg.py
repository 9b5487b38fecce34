"""Rydberg pulse generator and evolution against kron/expm oracles."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daqc_ga import rydberg, statevec
from daqc_ga.rydberg import (
    AnalogParams,
    DeviceConfig,
    Register,
    build_hamiltonian,
    evolution_unitary,
    evolve,
    hamiltonian_eigensystem,
    ring_register,
    unitary_from_eigensystem,
)

from conftest import evolution_oracle, rydberg_hamiltonian_oracle

# [DERIVED] default C6 over the default 8 um spacing to the sixth power
NEAREST_NEIGHBOR_V = 20.67626392364502

PARAM_FLOATS = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


class TestRegister:
    def test_ring_chord_spacing(self):
        for n in (3, 4, 6, 8):
            reg = ring_register(n, 8.0)
            d = reg.pairwise_distances()
            chords = [d[i, (i + 1) % n] for i in range(n)]
            np.testing.assert_allclose(chords, 8.0, atol=1e-12)

    def test_hexagon_radius_equals_spacing(self):
        # chord of a hexagon equals its radius
        reg = ring_register(6, 8.0)
        np.testing.assert_allclose(np.linalg.norm(reg.coordinates, axis=1), 8.0, atol=1e-12)

    def test_two_atoms_on_a_line(self):
        reg = ring_register(2, 5.0)
        assert reg.pairwise_distances()[0, 1] == pytest.approx(5.0)

    def test_single_atom(self):
        assert ring_register(1).n_atoms == 1

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            Register(np.zeros((3,)))
        with pytest.raises(ValueError):
            Register(np.zeros((2, 4)))

    def test_rejects_coincident_atoms(self):
        with pytest.raises(ValueError, match="coincident"):
            Register(np.zeros((2, 2)))

    def test_load_register(self, tmp_path):
        p = tmp_path / "atoms.reg"
        p.write_text("0 0\n8 0  # second atom\n\n4 6.9282\n")
        reg = rydberg.load_register(p)
        assert reg.n_atoms == 3
        assert reg.coordinates[1, 0] == 8.0

    def test_load_register_empty(self, tmp_path):
        p = tmp_path / "empty.reg"
        p.write_text("# nothing\n")
        with pytest.raises(ValueError):
            rydberg.load_register(p)


class TestParams:
    def test_negative_duration(self):
        with pytest.raises(ValueError):
            AnalogParams(1.0, 1.0, 0.0, -1.0)

    def test_with_duration(self):
        p = AnalogParams(1.0, 2.0, 3.0).with_duration(40.0)
        assert p.duration_ns == 40.0
        assert (p.omega, p.delta, p.phi) == (1.0, 2.0, 3.0)

    def test_bad_c6(self):
        with pytest.raises(ValueError):
            DeviceConfig(c6=0.0)


class TestHamiltonian:
    def test_single_atom_matrix(self):
        # [TRIVIAL] 2x2 closed form: offdiag (omega/2) e^{+-i phi}, diag [0, -delta]
        omega, delta, phi = 2.0, 0.7, 0.3
        h = build_hamiltonian(ring_register(1), AnalogParams(omega, delta, phi), DeviceConfig())
        expected = np.array(
            [[0, (omega / 2) * np.exp(1j * phi)], [(omega / 2) * np.exp(-1j * phi), -delta]]
        )
        np.testing.assert_allclose(h, expected, atol=1e-12)

    def test_two_atom_interaction_on_doubly_occupied(self):
        h = build_hamiltonian(ring_register(2, 8.0), AnalogParams(0.0, 0.0, 0.0), DeviceConfig())
        np.testing.assert_allclose(np.diag(h).real, [0, 0, 0, NEAREST_NEIGHBOR_V], atol=1e-9)

    @given(omega=PARAM_FLOATS, delta=PARAM_FLOATS, phi=PARAM_FLOATS)
    @settings(max_examples=40, deadline=None)
    def test_matches_kron_oracle(self, omega, delta, phi):
        reg = ring_register(3, 8.0)
        h = build_hamiltonian(reg, AnalogParams(omega, delta, phi), DeviceConfig())
        expected = rydberg_hamiltonian_oracle(
            reg.coordinates, omega, delta, phi, rydberg.DEFAULT_C6
        )
        np.testing.assert_allclose(h, expected, atol=1e-9)

    @given(omega=PARAM_FLOATS, delta=PARAM_FLOATS, phi=PARAM_FLOATS)
    @settings(max_examples=40, deadline=None)
    def test_hermitian(self, omega, delta, phi):
        h = build_hamiltonian(ring_register(4, 8.0), AnalogParams(omega, delta, phi), DeviceConfig())
        np.testing.assert_allclose(h, h.conj().T, atol=1e-12)

    def test_qubit_cap(self):
        reg = ring_register(statevec.MAX_QUBITS + 1, 8.0)
        with pytest.raises(ValueError):
            build_hamiltonian(reg, AnalogParams(1, 1, 0), DeviceConfig())


class TestEvolution:
    @given(
        omega=PARAM_FLOATS,
        delta=PARAM_FLOATS,
        phi=PARAM_FLOATS,
        t=st.floats(min_value=0.0, max_value=500.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_unitarity(self, omega, delta, phi, t):
        u = evolution_unitary(ring_register(3, 8.0), AnalogParams(omega, delta, phi, t), DeviceConfig())
        np.testing.assert_allclose(u.conj().T @ u, np.eye(8), atol=1e-9)

    def test_matches_expm_oracle(self):
        rng = np.random.default_rng(5)
        reg = ring_register(3, 8.0)
        for _ in range(10):
            omega, delta, phi = rng.uniform(-4, 4, 3)
            t = float(rng.uniform(0, 300))
            u = evolution_unitary(reg, AnalogParams(omega, delta, phi, t), DeviceConfig())
            expected = evolution_oracle(reg.coordinates, omega, delta, phi, rydberg.DEFAULT_C6, t)
            np.testing.assert_allclose(u, expected, atol=1e-9)

    def test_zero_duration_is_identity(self):
        u = evolution_unitary(ring_register(2, 8.0), AnalogParams(3.0, 1.0, 0.5, 0.0), DeviceConfig())
        np.testing.assert_allclose(u, np.eye(4), atol=1e-12)

    def test_durations_compose(self):
        reg = ring_register(2, 8.0)
        p = AnalogParams(2.0, 1.0, 0.4)
        u1 = evolution_unitary(reg, p.with_duration(70.0), DeviceConfig())
        u2 = evolution_unitary(reg, p.with_duration(30.0), DeviceConfig())
        u = evolution_unitary(reg, p.with_duration(100.0), DeviceConfig())
        np.testing.assert_allclose(u1 @ u2, u, atol=1e-10)

    def test_cached_eigensystem_matches_direct(self):
        reg = ring_register(3, 8.0)
        p = AnalogParams(1.5, 0.5, 0.2)
        vals, vecs = hamiltonian_eigensystem(reg, p, DeviceConfig())
        for t in (25.0, 110.0, 480.0):
            np.testing.assert_allclose(
                unitary_from_eigensystem(vals, vecs, t),
                evolution_unitary(reg, p.with_duration(t), DeviceConfig()),
                atol=1e-12,
            )

    def test_evolve_state(self):
        reg = ring_register(2, 8.0)
        p = AnalogParams(2.0, 1.0, 0.0, 120.0)
        psi = evolve(statevec.zero_state(2), reg, p, DeviceConfig())
        expected = evolution_oracle(reg.coordinates, 2.0, 1.0, 0.0, rydberg.DEFAULT_C6, 120.0)[:, 0]
        np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-9)

    def test_evolve_dimension_mismatch(self):
        with pytest.raises(ValueError):
            evolve(statevec.zero_state(3), ring_register(2, 8.0), AnalogParams(1, 1, 0, 10), DeviceConfig())
