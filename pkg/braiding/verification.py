"""
Invariant suites behind the `verify` command.

Each suite is a list of named checks. A check either passes or carries a
detail string naming what disagreed (for frame tables: the outcome row).
"""

import logging
from dataclasses import dataclass, field
from math import pi
from pathlib import Path
from typing import Callable, Dict, List, Tuple, Union

import numpy as np

from simulator import PauliString, StateVector, commutes, fidelity, stream_rng
from simulator.pauli import random_pauli
from simulator.statevector import projected_amplitudes

from .calibration import CALIBRATED_GATES, compare_calibration, load_calibration
from .circuits import (
    CIRCUIT_DEVIATIONS,
    Circuit,
    READOUT_CIRCUITS,
    build_gate_circuit,
    build_init_circuit,
    build_readout_circuit,
    build_u023,
    circuit_catalog,
    circuit_matrix,
    simulate_circuit,
)
from .encoding import (
    ENCODING_IDS,
    build_logical_state,
    canonical_inputs,
    check_codespace,
    gauge_table,
    get_encoding,
    logical_pauli,
)
from .protocol import (
    build_protocol,
    conditional_logical_action,
    derive_frame_table,
    match_reference_table,
    matches_up_to_phase,
    raw_overlap,
    run_protocol,
)
from .qasm import emit_qasm, parse_qasm
from .tomography import apply_correction, exact_expectations, ideal_output, reconstruct, state_fidelity

logger = logging.getLogger(__name__)

SUITES = ("algebra", "encodings", "phases", "frames", "circuits")
DETERMINISM_TOLERANCE = 1e-9
ROUNDTRIP_TOLERANCE = 1e-12
PHASE_GATES = {"S": pi / 2, "Sdg": -pi / 2, "T": pi / 4, "Tdg": -pi / 4}
U023_ANGLES = (0.0, pi / 8, pi / 4, pi / 2)


@dataclass
class CheckResult:
    """Outcome of one named check."""

    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    """
    Results of one suite (or of `all`).

    Attributes:
        name: Suite name
        checks: Every check in execution order
    """

    name: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(passed), "" if passed else detail))

    def to_dict(self) -> Dict[str, object]:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": len(self.checks),
            "failures": [{"name": c.name, "detail": c.detail} for c in self.failures],
        }


def _algebra(report: SuiteReport, fixture: Dict[str, object]) -> None:
    x, y, z = (PauliString(c) for c in "XYZ")
    report.add("XY = iZ", (x * y) == PauliString("Z", 1), f"got {x * y}")
    report.add("YX = -iZ", (y * x) == PauliString("Z", 3), f"got {y * x}")

    rng = stream_rng(7)
    for k in range(50):
        a, b = random_pauli(4, rng, allow_phase=False), random_pauli(4, rng, allow_phase=False)
        ma, mb = a.to_matrix(), b.to_matrix()
        expected = np.allclose(ma @ mb, mb @ ma)
        if commutes(a, b) != expected:
            report.add(f"commutation {a} {b}", False, "symplectic test disagrees with matrices")
            break
        if not np.allclose((a * b).to_matrix(), ma @ mb):
            report.add(f"product {a} {b}", False, "phase tracking disagrees with matrices")
            break
    else:
        report.add("random products and commutation", True)

    for gate_id in CALIBRATED_GATES:
        for k, axis in enumerate(build_protocol(gate_id).axes):
            report.add(f"{gate_id} axis {k} squares to identity", axis.observable.squares_to_identity(),
                       f"{axis.label()} does not square to I")

    state = StateVector.random(4, stream_rng(11))
    for axis in build_protocol("T").axes:
        once = projected_amplitudes(state.amps, axis.observable, 1)
        twice = projected_amplitudes(once, axis.observable, 1)
        report.add(f"projector {axis.label()} idempotent", np.allclose(once, twice, atol=1e-12),
                   "second projection changed the state")


def _encodings(report: SuiteReport, fixture: Dict[str, object]) -> None:
    for encoding_id in ENCODING_IDS:
        encoding = get_encoding(encoding_id)
        for labels in canonical_inputs(encoding_id) + [("-",) * encoding.n_logical, ("i-",) * encoding.n_logical]:
            state = build_logical_state(encoding_id, labels)
            codespace = check_codespace(state, encoding_id, tol=1e-12)
            report.add(f"{encoding_id} |{','.join(labels)}> in codespace", codespace.in_codespace,
                       f"flagged {codespace.flagged}")

        for k, ops in enumerate(encoding.logical_ops):
            flipped = ops["X"].apply(encoding.basis[0])
            report.add(f"{encoding_id} |1> = X_L|0> on logical qubit {k}",
                       np.allclose(flipped, encoding.basis[1 << k], atol=1e-12), "X_L does not map |0> to |1>")
            for a, b in (("X", "Y"), ("Y", "Z"), ("Z", "X")):
                report.add(f"{encoding_id} {a}{k} anticommutes with {b}{k}", not commutes(ops[a], ops[b]),
                           f"{ops[a]} and {ops[b]} commute")
            for op in encoding.sector_ops:
                report.add(f"{encoding_id} {op.name} commutes with logical qubit {k}",
                           all(commutes(op.string, ops[a]) for a in "XYZ"), f"{op.name} fails to commute")

        for label in ("X", "Y", "Z"):
            full = label * encoding.n_logical
            report.add(f"{encoding_id} logical {full} Hermitian", logical_pauli(encoding, full).is_hermitian,
                       "logical product picked up an imaginary phase")

        frozen = fixture.get("encodings", {}).get(encoding_id, {}).get("gauge_table")
        mismatches = compare_calibration(frozen, gauge_table(encoding_id), f"{encoding_id}.gauge_table")
        report.add(f"{encoding_id} gauge table matches fixture", not mismatches, "; ".join(mismatches))


def _phases(report: SuiteReport, fixture: Dict[str, object]) -> None:
    for gate_id, tau in PHASE_GATES.items():
        action = conditional_logical_action(gate_id, "111")
        expected = np.diag([np.exp(-0.5j * tau), np.exp(0.5j * tau)])
        report.add(f"{gate_id} branch 111 is Rz({tau:+.4f})", matches_up_to_phase(action, expected),
                   "conditional action differs from the diagonal phase gate")
        overlap = raw_overlap(gate_id, "111")
        report.add(f"{gate_id} raw overlap phase is {-tau / 2:+.6f}",
                   abs(np.angle(overlap) + tau / 2) < DETERMINISM_TOLERANCE,
                   f"phase {np.angle(overlap):+.12f}")


def _corrected_fidelity(gate_id: str, labels, outcomes: str) -> float:
    protocol = build_protocol(gate_id)
    state = build_logical_state(protocol.encoding.id, labels)
    result = run_protocol(state, gate_id, forced=outcomes)
    rho = reconstruct(exact_expectations(result.state, protocol.encoding), protocol.encoding.n_logical, psd=False)
    return state_fidelity(apply_correction(rho, result.correction), ideal_output(protocol.ideal, labels))


def _frames(report: SuiteReport, fixture: Dict[str, object]) -> None:
    protocols = fixture.get("protocols", {})
    for gate_id in CALIBRATED_GATES:
        derived = derive_frame_table(gate_id)
        frozen = protocols.get(gate_id, {}).get("frames", {})
        for outcomes in sorted(set(derived) | set(frozen)):
            got = str(derived[outcomes]) if outcomes in derived else None
            want = frozen.get(outcomes)
            report.add(f"{gate_id} {outcomes}", got == want, f"fixture {want}, derived {got}")
        match = match_reference_table(gate_id, derived)
        report.add(f"{gate_id} reproduces column {match.column}", match.matched,
                   f"rows {', '.join(match.mismatches)} disagree")

        encoding = build_protocol(gate_id).encoding
        worst = 1.0
        for labels in canonical_inputs(encoding.id):
            for outcomes in derived:
                worst = min(worst, _corrected_fidelity(gate_id, labels, outcomes))
        report.add(f"{gate_id} corrected outputs are deterministic", abs(1 - worst) < DETERMINISM_TOLERANCE,
                   f"worst corrected fidelity {worst:.12f}")


def _circuits(report: SuiteReport, fixture: Dict[str, object]) -> None:
    for encoding_id in ENCODING_IDS:
        n_logical = get_encoding(encoding_id).n_logical
        for label in ("0", "1", "+", "-", "i+", "i-"):
            labels = (label,) * n_logical
            prepared = simulate_circuit(build_init_circuit(encoding_id, labels)).state
            value = fidelity(prepared, build_logical_state(encoding_id, labels))
            report.add(f"init {encoding_id} {','.join(labels)}", abs(1 - value) < DETERMINISM_TOLERANCE,
                       f"fidelity {value:.12f}")

    for key, note in CIRCUIT_DEVIATIONS.items():
        logger.info(f"CIRCUIT_DEVIATION {key}: {note}")

    for (encoding_id, qubit, axis) in READOUT_CIRCUITS:
        encoding = get_encoding(encoding_id)
        labels = ["0"] * encoding.n_logical
        labels[qubit] = {"X": "+", "Y": "i+", "Z": "0"}[axis]
        state = build_logical_state(encoding_id, labels)
        result = simulate_circuit(build_readout_circuit(encoding_id, qubit, axis), state, rng=stream_rng(3))
        value = encoding.logical_ops[qubit][axis].sign * result.records[0].eigenvalue
        report.add(f"readout {encoding_id} q{qubit} {axis}", value == 1 and result.probability > 1 - 1e-9,
                   f"logical value {value} with probability {result.probability:.6f}")

    junction = get_encoding("Y1").junction
    x_center = PauliString.from_sparse(junction.n, {junction.center: "X"}).to_matrix()
    for tau in U023_ANGLES:
        unitary = circuit_matrix(build_u023(tau))
        target = junction.coupling(pi / 2, tau).to_matrix()
        report.add(f"u023 conjugation tau={tau:.4f}",
                   np.allclose(unitary @ x_center @ unitary.conj().T, target, atol=DETERMINISM_TOLERANCE),
                   "U X_c U† differs from the junction coupling")

    for gate_id in CALIBRATED_GATES:
        protocol = build_protocol(gate_id)
        labels = ("+",) * protocol.encoding.n_logical
        circuit = build_gate_circuit(gate_id, labels)
        state = build_logical_state(protocol.encoding.id, labels)
        worst_p, worst_f = 0.0, 1.0
        for outcomes in protocol.frame_table:
            simulated = simulate_circuit(circuit, forced=outcomes)
            reference = run_protocol(state, gate_id, forced=outcomes)
            worst_p = max(worst_p, abs(simulated.probability - reference.probability))
            worst_f = min(worst_f, fidelity(simulated.state, reference.state))
        report.add(f"gate circuit {gate_id} matches protocol",
                   worst_p < DETERMINISM_TOLERANCE and abs(1 - worst_f) < DETERMINISM_TOLERANCE,
                   f"probability gap {worst_p:.3e}, worst fidelity {worst_f:.12f}")

    for name, circuit in circuit_catalog().items():
        report.add(f"qasm round trip {name}", *roundtrip_check(circuit))


def roundtrip_check(circuit: Circuit, seed: int = 5) -> Tuple[bool, str]:
    """Emit, parse and re-simulate; (passed, detail)."""
    parsed = parse_qasm(emit_qasm(circuit))
    if parsed.ops != circuit.ops or parsed.n_qubits != circuit.n_qubits:
        return False, "parsed operations differ"
    before = simulate_circuit(circuit, rng=stream_rng(seed))
    after = simulate_circuit(parsed, rng=stream_rng(seed))
    gap = float(np.abs(before.state.amps - after.state.amps).max())
    if before.clbits != after.clbits or gap > ROUNDTRIP_TOLERANCE:
        return False, f"simulation differs (max amplitude gap {gap:.3e})"
    return True, ""


_SUITE_FUNCTIONS: Dict[str, Callable[[SuiteReport, Dict[str, object]], None]] = {
    "algebra": _algebra,
    "encodings": _encodings,
    "phases": _phases,
    "frames": _frames,
    "circuits": _circuits,
}


def run_suite(name: str, fixture: Union[str, Path, None] = None) -> SuiteReport:
    """
    Run one suite, or every suite in order for "all".

    Args:
        name: Suite name from SUITES, or "all"
        fixture: Calibration fixture path (default: configured fixture)

    Returns:
        SuiteReport; check names are prefixed with the suite name under "all"
    """
    if name != "all" and name not in _SUITE_FUNCTIONS:
        raise ValueError(f"Unknown suite: {name!r} (expected one of {SUITES + ('all',)})")
    document = load_calibration(fixture)
    names = SUITES if name == "all" else (name,)
    report = SuiteReport(name)
    for suite in names:
        partial = SuiteReport(suite)
        try:
            _SUITE_FUNCTIONS[suite](partial, document)
        except Exception as e:
            logger.error(f"Suite {suite} aborted: {e}")
            partial.add(f"{suite} completed", False, f"{type(e).__name__}: {e}")
        for check in partial.checks:
            prefix = f"{suite}: " if name == "all" else ""
            report.checks.append(CheckResult(prefix + check.name, check.passed, check.detail))
        logger.info(f"Suite {suite}: {len(partial.checks) - len(partial.failures)}/{len(partial.checks)} checks passed")
    return report
