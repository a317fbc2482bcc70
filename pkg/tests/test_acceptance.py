"""End-to-end behaviour of the simulator on the shipped gates."""

from math import cos, pi, sqrt

import numpy as np
import pytest

from braiding import (
    ExperimentConfig,
    build_gate_circuit,
    build_logical_state,
    build_protocol,
    build_u023,
    canonical_inputs,
    check_codespace,
    conditional_logical_action,
    derive_frame_table,
    gauge_table,
    get_encoding,
    match_reference_table,
    run_gate_experiment,
    run_protocol,
    simulate_circuit,
)
from braiding.circuits import circuit_catalog, circuit_matrix, random_circuit
from braiding.protocol import matches_up_to_phase
from braiding.tomography import (
    DensityMatrix,
    apply_correction,
    exact_expectations,
    ideal_output,
    process_fidelity,
    process_tomography,
    reconstruct,
    state_fidelity,
)
from braiding.verification import roundtrip_check
from simulator import NoiseModel, PauliString, depolarizing_channel, expectation, fidelity, stream_rng

GATES = ("S", "Sdg", "T", "Tdg", "RxxP", "RxxM")
SHOTS = 2 ** 15


class TestEncodedStates:
    """Logical basis states sit in the gauge sector."""

    @pytest.mark.parametrize("label, n_value", [("0", -1), ("1", 1)])
    def test_single_junction(self, y1, label, n_value):
        state = build_logical_state("Y1", [label])
        for name in ("W1", "W3", "h"):
            assert expectation(state, y1.gauge(name).string) == pytest.approx(-1, abs=1e-12)
        for name in ("W2", "n"):
            assert expectation(state, y1.gauge(name).string) == pytest.approx(n_value, abs=1e-12)

    @pytest.mark.parametrize("labels", [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")])
    def test_double_junction_tensor_states(self, labels):
        state = build_logical_state("Y2", labels)
        key = "".join(labels)
        for name, entry in gauge_table("Y2").items():
            string = PauliString.from_label(entry["string"])
            assert expectation(state, string) == pytest.approx(entry["values"][key], abs=1e-12)
        assert len(gauge_table("Y2")) == 10


class TestConditionalPhase:
    """All-minus outcomes implement the geometric phase gate."""

    @pytest.mark.parametrize("gate_id, tau", [("S", pi / 2), ("Sdg", -pi / 2), ("T", pi / 4), ("Tdg", -pi / 4)])
    def test_diagonal_action(self, gate_id, tau):
        expected = np.diag([np.exp(-0.5j * tau), np.exp(0.5j * tau)])
        assert matches_up_to_phase(conditional_logical_action(gate_id, "111"), expected, tol=1e-9)


class TestFrameTables:
    """Derived tables reproduce the reference columns row for row."""

    @pytest.mark.parametrize("gate_id", GATES)
    def test_reference_columns(self, gate_id):
        match = match_reference_table(gate_id, derive_frame_table(gate_id))
        assert match.matched
        assert match.mismatches == []


class TestDeterminism:
    """Corrected outputs equal the ideal gate output on every branch and input."""

    @pytest.mark.parametrize("gate_id", GATES + ("I",))
    def test_every_branch(self, gate_id):
        protocol = build_protocol(gate_id)
        encoding = protocol.encoding
        for labels in canonical_inputs(encoding.id):
            state = build_logical_state(encoding.id, labels)
            for outcomes in protocol.frame_table:
                result = run_protocol(state, gate_id, forced=outcomes)
                rho = reconstruct(exact_expectations(result.state, encoding), encoding.n_logical, psd=False)
                value = state_fidelity(apply_correction(rho, result.correction), ideal_output(protocol.ideal, labels))
                assert abs(1 - value) < 1e-9


class TestOutcomeStatistics:
    """Sampled outcome strings follow the projector distribution."""

    def _check(self, frequencies, expected, n):
        for outcomes, p in expected.items():
            sigma = sqrt(p * (1 - p) / n)
            assert abs(frequencies[outcomes] - p) < 5 * sigma, outcomes

    def test_s_is_uniform(self):
        result = run_gate_experiment(ExperimentConfig("S", labels="+", shots=SHOTS, seed=21, bootstrap=0))
        self._check(result.branch_frequencies["+"], {f"{k:03b}": 0.125 for k in range(8)}, 3 * SHOTS)

    def test_t_distribution(self):
        result = run_gate_experiment(ExperimentConfig("T", labels="0", shots=SHOTS, seed=22, bootstrap=0))
        large = 0.25 * cos(pi / 8) ** 2
        expected = {f"{k:03b}": large if f"{k:03b}"[0] == f"{k:03b}"[1] else 0.25 - large for k in range(8)}
        self._check(result.branch_frequencies["0"], expected, 3 * SHOTS)


class TestNoiselessProcessFidelity:
    """Unit process fidelity without noise."""

    @pytest.mark.parametrize("gate_id", GATES + ("I",))
    def test_exact(self, gate_id):
        result = run_gate_experiment(ExperimentConfig(gate_id, exact=True))
        assert abs(1 - result.process_fidelity) < 1e-9

    @pytest.mark.slow
    @pytest.mark.parametrize("gate_id", GATES + ("I",))
    def test_sampled(self, gate_id):
        result = run_gate_experiment(ExperimentConfig(gate_id, shots=SHOTS, seed=100, bootstrap=10))
        process = next(r for r in result.records if r.quantity == "process")
        assert abs(1 - process.value) < max(3 * process.stderr, 5e-3)


class TestCircuitEquivalence:
    """Gate-level circuits agree with the projector protocol."""

    @pytest.mark.parametrize("gate_id", GATES)
    def test_gate_circuits(self, gate_id):
        protocol = build_protocol(gate_id)
        for labels in canonical_inputs(protocol.encoding.id):
            circuit = build_gate_circuit(gate_id, labels)
            state = build_logical_state(protocol.encoding.id, labels)
            for outcomes in protocol.frame_table:
                simulated = simulate_circuit(circuit, forced=outcomes)
                reference = run_protocol(state, gate_id, forced=outcomes)
                assert abs(simulated.probability - reference.probability) < 1e-9
                assert abs(1 - fidelity(simulated.state, reference.state)) < 1e-9

    @pytest.mark.parametrize("encoding_id", ["Y1", "Y2"])
    def test_initialization_in_codespace(self, encoding_id):
        for name, circuit in circuit_catalog().items():
            if name.startswith(f"init {encoding_id} "):
                state = simulate_circuit(circuit).state
                assert check_codespace(state, encoding_id, tol=1e-9).in_codespace, name

    @pytest.mark.parametrize("tau", [0.0, pi / 8, pi / 4, pi / 2])
    def test_u023_conjugation(self, tau):
        junction = get_encoding("Y1").junction
        unitary = circuit_matrix(build_u023(tau))
        x_center = PauliString.from_sparse(4, {junction.center: "X"}).to_matrix()
        np.testing.assert_allclose(unitary @ x_center @ unitary.conj().T,
                                   junction.coupling(pi / 2, tau).to_matrix(), atol=1e-9)


class TestTomographyOracles:
    """Known channels give known fidelities."""

    @pytest.mark.parametrize("p", [0.1, 0.2])
    def test_depolarizing(self, p):
        def runner(labels):
            rho = DensityMatrix.from_vector(ideal_output(np.eye(2), labels))
            return DensityMatrix(depolarizing_channel(rho.matrix, p))

        assert abs(process_fidelity(process_tomography(runner, 1), np.eye(2)) - (1 - 3 * p / 4)) < 1e-6

    @pytest.mark.parametrize("p_ro", [0.02, 0.1])
    def test_readout_attenuation(self, y2, p_ro):
        state = build_logical_state("Y2", ["+", "i+"])
        clean = exact_expectations(state, y2)
        noisy = exact_expectations(state, y2, p_ro=p_ro)
        for label, value in clean.items():
            weight = sum(1 for c in label if c != "I")
            assert abs(noisy[label] - (1 - 2 * p_ro) ** weight * value) < 1e-6


@pytest.mark.slow
class TestNoiseDirection:
    """Longer protocols lose more fidelity under the device noise model."""

    def _process(self, gate_id, noise, trajectories, seed):
        config = ExperimentConfig(gate_id, exact=True, noise=noise, trajectories=trajectories, seed=seed)
        return run_gate_experiment(config).process_fidelity

    def test_single_junction_ordering(self):
        base = NoiseModel.device_defaults("Y1", p_idle=0.0)
        noise = NoiseModel(p1=10 * base.p1, p2=10 * base.p2, p_ro=base.p_ro)
        identity = self._process("I", noise, 1000, 1)
        s = self._process("S", noise, 1000, 2)
        t = self._process("T", noise, 1000, 3)
        assert identity > s > t

    def test_two_junction_gate_degrades_more(self):
        y1 = self._process("S", NoiseModel.device_defaults("Y1"), 128, 4)
        y2 = self._process("RxxP", NoiseModel.device_defaults("Y2"), 128, 5)
        assert y1 > y2


@pytest.mark.slow
class TestQasmRoundTrip:
    """Emit, parse and re-simulate."""

    def test_random_circuits(self):
        rng = stream_rng(2024)
        for k in range(1000):
            circuit = random_circuit(int(rng.integers(1, 6)), int(rng.integers(1, 30)), rng)
            passed, detail = roundtrip_check(circuit, seed=k)
            assert passed, f"circuit {k}: {detail}"

    def test_catalog(self):
        for name, circuit in circuit_catalog().items():
            passed, detail = roundtrip_check(circuit)
            assert passed, f"{name}: {detail}"
