"""Tests for circuit builders and circuit simulation."""

from math import pi

import numpy as np
import pytest

from braiding import (
    Circuit,
    build_gate_circuit,
    build_init_circuit,
    build_logical_state,
    build_parity_check,
    build_protocol,
    build_readout_circuit,
    build_u023,
    circuit_catalog,
    get_encoding,
    lower_to_basis,
    run_protocol,
    simulate_circuit,
)
from braiding.circuits import (
    BASIS_GATES,
    CIRCUIT_DEVIATIONS,
    MEASURE,
    UNBOXED_Y1_PLUS,
    READOUT_CIRCUITS,
    _circuit,
    circuit_matrix,
    random_circuit,
)
from braiding.protocol import MeasurementAxis
from simulator import DimensionError, NoiseModel, PauliString, StateVector, UnknownGateError, fidelity, stream_rng

LABELS = ("0", "1", "+", "-", "i+", "i-")


class TestCircuitModel:
    """Validation of the operation list."""

    def test_builder_chain(self):
        circuit = Circuit(2, 1).gate("h", 0).gate("cx", 0, 1).measure(1, 0)
        assert circuit.count_ops() == {"h": 1, "cx": 1, "measure": 1}
        assert len(circuit.measurements) == 1

    def test_rejects_unknown_gate(self):
        with pytest.raises(UnknownGateError):
            Circuit(1).gate("foo", 0)

    def test_rejects_out_of_range(self):
        with pytest.raises(DimensionError):
            Circuit(2).gate("h", 2)

    def test_rejects_double_write(self):
        circuit = Circuit(1, 1).measure(0, 0)
        with pytest.raises(ValueError):
            circuit.measure(0, 0)

    def test_parameter_count(self):
        with pytest.raises(ValueError):
            Circuit(1).gate("rz", 0)

    def test_inverse(self):
        circuit = Circuit(3).gate("h", 0).gate("s", 1).gate("rz", 2, params=(0.4,)).gate("ccx", 0, 1, 2).gate("sx", 1)
        identity = circuit_matrix(Circuit(3).compose(circuit).compose(circuit.inverse()))
        np.testing.assert_allclose(identity, np.eye(8), atol=1e-12)

    def test_window_is_metadata(self):
        a = Circuit(2, 1).measure(0, 0, window=(0, 1))
        b = Circuit(2, 1).measure(0, 0)
        assert a.ops == b.ops


class TestInitialization:
    """Preparation circuits reach the analytic logical states."""

    @pytest.mark.parametrize("encoding_id", ["Y1", "Y2"])
    @pytest.mark.parametrize("label", LABELS)
    def test_uniform_labels(self, encoding_id, label):
        labels = (label,) * get_encoding(encoding_id).n_logical
        prepared = simulate_circuit(build_init_circuit(encoding_id, labels)).state
        assert fidelity(prepared, build_logical_state(encoding_id, labels)) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("labels", [("0", "+"), ("i+", "1"), ("-", "i-")])
    def test_mixed_labels(self, labels):
        prepared = simulate_circuit(build_init_circuit("Y2", labels)).state
        assert fidelity(prepared, build_logical_state("Y2", labels)) == pytest.approx(1.0, abs=1e-9)

    def test_unboxed_plus_preparation_misses_target(self):
        assert "Y1 init +" in CIRCUIT_DEVIATIONS
        prepared = simulate_circuit(_circuit(4, UNBOXED_Y1_PLUS)).state
        assert fidelity(prepared, build_logical_state("Y1", ["+"])) < 1 - 1e-3


class TestReadout:
    """Logical-basis measurement circuits."""

    @pytest.mark.parametrize("key", sorted(READOUT_CIRCUITS))
    def test_eigenstates_read_plus_one(self, key):
        encoding_id, qubit, axis = key
        encoding = get_encoding(encoding_id)
        for label, sign in ({"X": "+", "Y": "i+", "Z": "0"}[axis], 1), ({"X": "-", "Y": "i-", "Z": "1"}[axis], -1):
            labels = ["0"] * encoding.n_logical
            labels[qubit] = label
            result = simulate_circuit(build_readout_circuit(encoding_id, qubit, axis), build_logical_state(encoding_id, labels),
                                      rng=stream_rng(0))
            assert result.probability == pytest.approx(1.0)
            assert encoding.logical_ops[qubit][axis].sign * result.records[0].eigenvalue == sign

    def test_unknown_readout(self):
        with pytest.raises(ValueError):
            build_readout_circuit("Y1", 1, "X")


class TestChecks:
    """Parity fragments and the three-qubit entangler."""

    @pytest.mark.parametrize("tau", [0.0, pi / 8, pi / 4, pi / 2, 1.1])
    def test_u023_conjugation(self, tau):
        junction = get_encoding("Y1").junction
        unitary = circuit_matrix(build_u023(tau))
        x_center = PauliString.from_sparse(4, {junction.center: "X"}).to_matrix()
        np.testing.assert_allclose(unitary @ x_center @ unitary.conj().T,
                                   junction.coupling(pi / 2, tau).to_matrix(), atol=1e-9)

    def test_u023_reductions(self):
        assert build_u023(0.0).count_ops() == {"cx": 1}
        assert build_u023(pi / 2).count_ops() == {"s": 1, "cy": 1}

    def test_u023_rejects_nan(self):
        with pytest.raises(ValueError):
            build_u023(float("nan"))

    @pytest.mark.parametrize("theta, phi", [(pi / 2, 0.0), (pi / 2, pi / 2), (0.0, 0.0)])
    def test_parity_check_measures_pair(self, theta, phi, rng):
        junction = get_encoding("Y1").junction
        axis = MeasurementAxis(theta, phi, junction)
        state = StateVector.random(4, rng)
        for bit in ("0", "1"):
            sign = -1 if bit == "1" else 1
            result = simulate_circuit(build_parity_check(axis), state, forced=bit)
            expected = 0.5 * (state.amps + sign * axis.observable.apply(state.amps))
            p = np.vdot(expected, expected).real
            assert result.probability == pytest.approx(p)
            assert fidelity(result.state, StateVector.from_amplitudes(expected)) == pytest.approx(1.0)

    def test_parity_check_rejects_sums(self):
        with pytest.raises(ValueError):
            build_parity_check(MeasurementAxis(pi / 2, pi / 4, get_encoding("Y1").junction))


class TestGateCircuits:
    """Full gate circuits reproduce the projector protocol."""

    @pytest.mark.parametrize("gate_id", ["S", "Sdg", "T", "Tdg", "RxxP", "RxxM"])
    def test_branches_match_protocol(self, gate_id):
        protocol = build_protocol(gate_id)
        labels = ("i+",) + ("0",) * (protocol.encoding.n_logical - 1)
        circuit = build_gate_circuit(gate_id, labels)
        state = build_logical_state(protocol.encoding.id, labels)
        for outcomes in protocol.frame_table:
            simulated = simulate_circuit(circuit, forced=outcomes)
            reference = run_protocol(state, gate_id, forced=outcomes)
            assert simulated.probability == pytest.approx(reference.probability, abs=1e-9)
            assert fidelity(simulated.state, reference.state) == pytest.approx(1.0, abs=1e-9)

    def test_classical_bits(self):
        circuit = build_gate_circuit("S", "+")
        assert circuit.n_clbits == 3
        assert [op.clbit for op in circuit.measurements] == [0, 1, 2]

    def test_identity_gate_circuit(self):
        circuit = build_gate_circuit("I", ("0", "1"))
        assert circuit.n_qubits == 10
        assert circuit.n_clbits == 0


class TestSimulation:
    """Sampling, forcing and noise."""

    def test_forced_length(self):
        with pytest.raises(ValueError):
            simulate_circuit(build_gate_circuit("S", "+"), forced="01")

    def test_seeded_runs_repeat(self):
        circuit = build_gate_circuit("T", "+")
        a = simulate_circuit(circuit, rng=stream_rng(4))
        b = simulate_circuit(circuit, rng=stream_rng(4))
        assert a.clbits == b.clbits
        np.testing.assert_allclose(a.state.amps, b.state.amps)

    def test_noiseless_model_matches_clean_run(self):
        circuit = build_gate_circuit("S", "0")
        clean = simulate_circuit(circuit, rng=stream_rng(2))
        quiet = simulate_circuit(circuit, rng=stream_rng(2), noise=NoiseModel(), noise_rng=stream_rng(3))
        np.testing.assert_allclose(clean.state.amps, quiet.state.amps)

    def test_readout_flips_recorded_bits(self):
        circuit = Circuit(1, 1).measure(0, 0)
        result = simulate_circuit(circuit, rng=stream_rng(0), noise=NoiseModel(p_ro=1.0), noise_rng=stream_rng(1))
        assert result.clbits == "1"
        assert abs(result.state.amps[0]) == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            simulate_circuit(Circuit(2), StateVector.zero(3))


class TestLowering:
    """Rewriting into the hardware basis."""

    @pytest.mark.parametrize("name", ["gate S", "gate T", "init Y1 i+", "u023 pi/8"])
    def test_lowered_circuits_are_equivalent(self, name):
        circuit = circuit_catalog()[name]
        lowered = lower_to_basis(circuit)
        assert {op.name for op in lowered.ops if op.kind == "gate"} <= BASIS_GATES
        assert all(op.basis == "z" for op in lowered.ops if op.kind == MEASURE)
        forced = "0" * circuit.n_clbits if circuit.n_clbits else None
        a = simulate_circuit(circuit, forced=forced)
        b = simulate_circuit(lowered, forced=forced)
        assert a.probability == pytest.approx(b.probability, abs=1e-9)
        assert fidelity(a.state, b.state) == pytest.approx(1.0, abs=1e-9)

    def test_random_circuits(self):
        rng = stream_rng(17)
        for _ in range(20):
            circuit = random_circuit(3, 15, rng)
            a = simulate_circuit(circuit, rng=stream_rng(1))
            b = simulate_circuit(lower_to_basis(circuit), forced=a.clbits)
            assert fidelity(a.state, b.state) == pytest.approx(1.0, abs=1e-9)


class TestCatalog:
    """Every named circuit of the library."""

    def test_contents(self):
        catalog = circuit_catalog()
        assert "init Y2 +,+" in catalog
        assert "readout Y2 q1 Z" in catalog
        assert {f"gate {g}" for g in ("S", "Sdg", "T", "Tdg", "RxxP", "RxxM")} <= set(catalog)
        assert len(catalog) == 12 + len(READOUT_CIRCUITS) + 4 + 6
