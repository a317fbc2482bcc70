"""
Measurement-based geometric gates.

A gate is an ordered list of junction parity measurements P(theta, phi).
Outcome strings carry one bit per measurement, first measurement leftmost,
bit 1 meaning eigenvalue -1. Each outcome string has a frame correction that
turns the conditional logical action into the ideal gate.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import pi
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from simulator import MeasurementRecord, StateVector, measure
from simulator.errors import CodespaceError, FrameDerivationError, ZeroProbabilityError
from simulator.pauli import PAULI_MATRICES, PauliSum, pauli_strings
from simulator.statevector import ZERO_PROBABILITY, projected_amplitudes

from .encoding import Junction, LogicalEncoding, check_codespace, get_encoding

logger = logging.getLogger(__name__)

GATE_IDS = ("S", "Sdg", "T", "Tdg", "RxxP", "RxxM", "I", "Rz")
GATE_ALIASES = {
    "S†": "Sdg", "T†": "Tdg", "SDG": "Sdg", "TDG": "Tdg",
    "RXX+": "RxxP", "RXX-": "RxxM", "RXX−": "RxxM", "RXXP": "RxxP", "RXXM": "RxxM",
    "S": "S", "T": "T", "I": "I", "ID": "I", "RZ": "Rz",
}
GATE_ENCODINGS = {"S": "Y1", "Sdg": "Y1", "T": "Y1", "Tdg": "Y1", "Rz": "Y1", "RxxP": "Y2", "RxxM": "Y2", "I": "Y1"}
FRAME_TOLERANCE = 1e-9
FIXUPS = ("I", "S", "Sdg")

_FIXUP_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
}

# Reference tables, keyed as listed in their "Measurement" column
REFERENCE_TABLES: Dict[str, Dict[str, str]] = {
    "S/T": {"000": "X", "001": "Y", "010": "Y", "011": "X", "100": "I", "101": "Z", "110": "Z", "111": "I"},
    "Sdg/Tdg": {"000": "Y", "001": "X", "010": "X", "011": "Y", "100": "I", "101": "Z", "110": "Z", "111": "I"},
    "Rxx+": {"000": "IY", "001": "II", "010": "XZ", "011": "XX", "100": "XZ", "101": "XX", "110": "IY", "111": "II"},
    "Rxx-": {"000": "XZ", "001": "II", "010": "IY", "011": "XX", "100": "IY", "101": "XX", "110": "XZ", "111": "II"},
}
REFERENCE_COLUMNS = {"S": "S/T", "T": "S/T", "Sdg": "Sdg/Tdg", "Tdg": "Sdg/Tdg", "RxxP": "Rxx+", "RxxM": "Rxx-"}


def normalize_gate_id(gate_id: str) -> str:
    """Canonical gate id, accepting aliases such as "S†", "Rxx+" or "rxx-"."""
    key = gate_id.strip()
    if key in GATE_IDS:
        return key
    canonical = GATE_ALIASES.get(key.upper())
    if canonical is None:
        raise ValueError(f"Unknown gate: {gate_id!r} (expected one of {GATE_IDS})")
    return canonical


@dataclass(frozen=True)
class MeasurementAxis:
    """
    Direction (theta, phi) of a junction parity measurement.

    Attributes:
        theta: Polar angle in radians
        phi: Azimuthal angle in radians
        junction: Junction the measurement acts on
    """

    theta: float
    phi: float
    junction: Junction

    @property
    def observable(self) -> PauliSum:
        return self.junction.coupling(self.theta, self.phi)

    def label(self) -> str:
        return f"({_angle_text(self.theta)},{_angle_text(self.phi)})"


def _angle_text(angle: float) -> str:
    for text, value in (("0", 0.0), ("pi/2", pi / 2), ("pi/4", pi / 4), ("pi", pi)):
        if abs(angle - value) < 1e-12:
            return text
    return f"{angle:.6g}"


@dataclass(frozen=True)
class FrameCorrection:
    """
    Logical correction C = P·F, the fix-up F applied before the Pauli P.

    Attributes:
        pauli: Logical Pauli letters, character k acting on logical qubit k
        fixup: "I", "S" or "Sdg" (single-logical-qubit encodings only)
    """

    pauli: str
    fixup: str = "I"

    def __str__(self) -> str:
        return self.pauli if self.fixup == "I" else f"{self.pauli}*{self.fixup}"

    @classmethod
    def parse(cls, text: str) -> "FrameCorrection":
        pauli, _, fixup = text.partition("*")
        return cls(pauli, fixup or "I")

    @property
    def is_pauli(self) -> bool:
        return self.fixup == "I"

    def matrix(self) -> np.ndarray:
        pauli = logical_pauli_matrix(self.pauli)
        if self.fixup == "I":
            return pauli
        return pauli @ _FIXUP_MATRICES[self.fixup]


def logical_pauli_matrix(letters: str) -> np.ndarray:
    """Matrix of a logical Pauli label in the little-endian logical index."""
    matrix = np.array([[1]], dtype=complex)
    for letter in letters:
        matrix = np.kron(PAULI_MATRICES[letter], matrix)
    return matrix


@dataclass(frozen=True)
class GateProtocol:
    """
    A measurement-based gate on an encoding.

    Attributes:
        gate_id: Canonical gate id
        encoding: Encoding the gate acts on
        axes: Ordered measurement axes
        frame_table: Outcome string -> correction (zero-probability branches absent)
        ideal: Target logical unitary
        tau: Rotation angle for Rz-type gates
    """

    gate_id: str
    encoding: LogicalEncoding
    axes: Tuple[MeasurementAxis, ...]
    frame_table: Dict[str, FrameCorrection] = field(hash=False, compare=False)
    ideal: np.ndarray = field(repr=False, hash=False, compare=False)
    tau: Optional[float] = None

    @property
    def n_measurements(self) -> int:
        return len(self.axes)

    def outcome_strings(self) -> List[str]:
        return outcome_strings(self.n_measurements)


def outcome_strings(m: int) -> List[str]:
    return ["".join(bits) for bits in product("01", repeat=m)]


def _resolve(gate_id: str, tau: Optional[float], encoding_id: Optional[str]) -> Tuple[str, Optional[float], str]:
    gate_id = normalize_gate_id(gate_id)
    if gate_id == "Rz":
        if tau is None:
            raise ValueError("Gate Rz needs an explicit tau")
        tau = float(tau)
    else:
        tau = {"S": pi / 2, "Sdg": -pi / 2, "T": pi / 4, "Tdg": -pi / 4}.get(gate_id)
    default = GATE_ENCODINGS[gate_id]
    if encoding_id is None or gate_id != "I":
        if encoding_id is not None and encoding_id != default:
            raise ValueError(f"Gate {gate_id} acts on encoding {default}, not {encoding_id}")
        encoding_id = default
    return gate_id, tau, encoding_id


def gate_sequence(gate_id: str, tau: Optional[float] = None, encoding_id: Optional[str] = None) -> List[MeasurementAxis]:
    """
    Ordered measurement axes of a gate (the leading P(0,0) is omitted).

    Rz(tau) is (pi/2, 0) -> (pi/2, tau) -> (0, 0); daggers swap the two middle axes.
    Rxx gates use the Y2 ancilla junction.
    """
    gate_id, tau, encoding_id = _resolve(gate_id, tau, encoding_id)
    junction = get_encoding(encoding_id).junction
    if gate_id == "I":
        angles: List[Tuple[float, float]] = []
    elif gate_id == "RxxP":
        angles = [(pi / 2, pi / 2), (pi / 2, 0.0), (0.0, 0.0)]
    elif gate_id == "RxxM":
        angles = [(pi / 2, 0.0), (pi / 2, pi / 2), (0.0, 0.0)]
    elif tau >= 0:
        angles = [(pi / 2, 0.0), (pi / 2, tau), (0.0, 0.0)]
    else:
        angles = [(pi / 2, -tau), (pi / 2, 0.0), (0.0, 0.0)]
    return [MeasurementAxis(theta, phi, junction) for theta, phi in angles]


def ideal_unitary(gate_id: str, tau: Optional[float] = None, encoding_id: Optional[str] = None) -> np.ndarray:
    """Target logical unitary: Rz(tau) = exp(-i tau Z/2), Rxx(+-pi/2) = exp(-+i pi/4 XX), identity."""
    gate_id, tau, encoding_id = _resolve(gate_id, tau, encoding_id)
    if gate_id == "I":
        return np.eye(get_encoding(encoding_id).dim, dtype=complex)
    if gate_id in ("RxxP", "RxxM"):
        angle = pi / 2 if gate_id == "RxxP" else -pi / 2
        return expm(-0.5j * angle * logical_pauli_matrix("XX"))
    return expm(-0.5j * tau * PAULI_MATRICES["Z"])


def _branch_outputs(encoding: LogicalEncoding, axes: Sequence[MeasurementAxis], outcomes: str) -> List[np.ndarray]:
    """Unnormalized projector-sequence outputs for every logical basis input."""
    if len(outcomes) != len(axes) or set(outcomes) - {"0", "1"}:
        raise ValueError(f"Outcome string {outcomes!r} does not fit {len(axes)} measurements")
    outputs = []
    for amps in encoding.basis:
        for axis, bit in zip(axes, outcomes):
            amps = projected_amplitudes(amps, axis.observable, -1 if bit == "1" else 1)
        outputs.append(amps)
    return outputs


def _output_frame(encoding: LogicalEncoding, outputs: Sequence[np.ndarray]) -> List[np.ndarray]:
    """
    Output logical basis: |0_out> is the Z_L = +1 part of a branch output,
    |a_out> = prod X_k^{a_k} |0_out>.
    """
    for amps in outputs:
        if np.linalg.norm(amps) <= ZERO_PROBABILITY:
            continue
        for flips in range(encoding.dim):
            ref = amps
            for k in range(encoding.n_logical):
                if (flips >> k) & 1:
                    ref = encoding.logical_ops[k]["X"].apply(ref)
            for k in range(encoding.n_logical):
                ref = 0.5 * (ref + encoding.logical_ops[k]["Z"].apply(ref))
            norm = np.linalg.norm(ref)
            if norm > 1e-9:
                ref = ref / norm
                frame = []
                for a in range(encoding.dim):
                    vec = ref
                    for k in range(encoding.n_logical):
                        if (a >> k) & 1:
                            vec = encoding.logical_ops[k]["X"].apply(vec)
                    frame.append(vec)
                return frame
    raise ZeroProbabilityError("Every branch output vanishes")


def conditional_logical_action(gate_id: str, outcomes: str, tau: Optional[float] = None,
                               encoding_id: Optional[str] = None) -> np.ndarray:
    """
    Logical matrix implemented by one outcome branch, rescaled to |det| = 1.

    M_ab = <a_out| P_outcomes |b_L>; the result is unitary up to a global phase.
    """
    gate_id, tau, encoding_id = _resolve(gate_id, tau, encoding_id)
    encoding = get_encoding(encoding_id)
    axes = gate_sequence(gate_id, tau, encoding_id)
    outputs = _branch_outputs(encoding, axes, outcomes)
    frame = _output_frame(encoding, outputs)
    action = np.array([[np.vdot(a, b) for b in outputs] for a in frame])
    det = abs(np.linalg.det(action))
    if det <= ZERO_PROBABILITY:
        raise ZeroProbabilityError(f"Branch {outcomes!r} of {gate_id} is not invertible on the codespace")
    return action / det ** (1 / encoding.dim)


def raw_overlap(gate_id: str, outcomes: str, tau: Optional[float] = None) -> complex:
    """<0_L| P_outcomes |0_L> without renormalization."""
    gate_id, tau, encoding_id = _resolve(gate_id, tau, None)
    encoding = get_encoding(encoding_id)
    outputs = _branch_outputs(encoding, gate_sequence(gate_id, tau, encoding_id), outcomes)
    return complex(np.vdot(encoding.basis[0], outputs[0]))


def branch_probabilities(gate_id: str, tau: Optional[float] = None,
                         encoding_id: Optional[str] = None) -> Dict[str, float]:
    """Outcome-string probabilities on |0_L> (input-independent for the supported gates)."""
    gate_id, tau, encoding_id = _resolve(gate_id, tau, encoding_id)
    encoding = get_encoding(encoding_id)
    axes = gate_sequence(gate_id, tau, encoding_id)
    probabilities = {}
    for outcomes in outcome_strings(len(axes)):
        amps = _branch_outputs(encoding, axes, outcomes)[0]
        probabilities[outcomes] = float(np.vdot(amps, amps).real)
        logger.debug(f"{gate_id} branch {outcomes or '-'}: p={probabilities[outcomes]:.12f}")
    return probabilities


def _candidates(n_logical: int) -> List[FrameCorrection]:
    paulis = [s.letters for s in pauli_strings(n_logical, include_identity=True)]
    candidates = [FrameCorrection(p) for p in paulis]
    if n_logical == 1:
        for fixup in FIXUPS[1:]:
            candidates.extend(FrameCorrection(p, fixup) for p in paulis)
    return candidates


def matches_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = FRAME_TOLERANCE) -> bool:
    """True iff a = e^{i phi} b for unitaries of equal dimension."""
    return abs(abs(np.trace(a.conj().T @ b)) / a.shape[0] - 1) < tol


def find_correction(action: np.ndarray, ideal: np.ndarray, n_logical: int) -> FrameCorrection:
    """First correction C (Paulis, then Pauli·S, then Pauli·Sdg) with C·action ∝ ideal."""
    for candidate in _candidates(n_logical):
        if matches_up_to_phase(ideal, candidate.matrix() @ action):
            return candidate
    raise FrameDerivationError("No frame correction maps the branch action onto the ideal gate")


def derive_frame_table(gate_id: str, tau: Optional[float] = None,
                       encoding_id: Optional[str] = None) -> Dict[str, FrameCorrection]:
    """Correction for every outcome string with nonzero probability."""
    gate_id, tau, encoding_id = _resolve(gate_id, tau, encoding_id)
    encoding = get_encoding(encoding_id)
    ideal = ideal_unitary(gate_id, tau, encoding_id)
    probabilities = branch_probabilities(gate_id, tau, encoding_id)
    table: Dict[str, FrameCorrection] = {}
    for outcomes, probability in probabilities.items():
        if probability <= ZERO_PROBABILITY:
            logger.debug(f"{gate_id}: skipping impossible branch {outcomes}")
            continue
        action = conditional_logical_action(gate_id, outcomes, tau, encoding_id)
        try:
            table[outcomes] = find_correction(action, ideal, encoding.n_logical)
        except FrameDerivationError:
            raise FrameDerivationError(f"{gate_id}: no frame correction for outcome string {outcomes!r}")
    return table


@lru_cache(maxsize=64)
def build_protocol(gate_id: str, tau: Optional[float] = None, encoding_id: Optional[str] = None) -> GateProtocol:
    """Protocol with its derived frame table (cached per gate)."""
    gate_id, tau, encoding_id = _resolve(gate_id, tau, encoding_id)
    axes = tuple(gate_sequence(gate_id, tau, encoding_id))
    if axes:
        frame_table = derive_frame_table(gate_id, tau, encoding_id)
    else:
        frame_table = {"": FrameCorrection("I" * get_encoding(encoding_id).n_logical)}
    logger.debug(f"Built protocol {gate_id} on {encoding_id} with {len(frame_table)} frame entries")
    return GateProtocol(
        gate_id=gate_id,
        encoding=get_encoding(encoding_id),
        axes=axes,
        frame_table=frame_table,
        ideal=ideal_unitary(gate_id, tau, encoding_id),
        tau=tau,
    )


@dataclass
class ReferenceMatch:
    """
    Result of comparing a derived table with a reference column.

    Attributes:
        column: Reference table column
        bit_order: "forward" (first measurement leftmost) or "reversed"
        letter_order: "forward" (logical qubit 0 first) or "reversed"
        matched: True when every row agrees
        mismatches: Rows that disagree under the best orientation
    """

    column: str
    bit_order: str
    letter_order: str
    matched: bool
    mismatches: List[str] = field(default_factory=list)

    def reference_key(self, outcomes: str) -> str:
        return outcomes if self.bit_order == "forward" else outcomes[::-1]

    def reference_letters(self, pauli: str) -> str:
        return pauli if self.letter_order == "forward" else pauli[::-1]


def match_reference_table(gate_id: str, table: Dict[str, FrameCorrection]) -> Optional[ReferenceMatch]:
    """Try both bit orders and letter orders against the reference table; the first full match wins."""
    gate_id = normalize_gate_id(gate_id)
    column = REFERENCE_COLUMNS.get(gate_id)
    if column is None:
        return None
    reference = REFERENCE_TABLES[column]
    best: Optional[ReferenceMatch] = None
    for bit_order in ("forward", "reversed"):
        for letter_order in ("forward", "reversed"):
            candidate = ReferenceMatch(column, bit_order, letter_order, matched=False)
            for outcomes, correction in sorted(table.items()):
                expected = reference.get(candidate.reference_key(outcomes))
                if candidate.reference_letters(correction.pauli) != expected:
                    candidate.mismatches.append(outcomes)
            candidate.matched = not candidate.mismatches and len(table) == len(reference)
            if candidate.matched:
                return candidate
            if best is None or len(candidate.mismatches) < len(best.mismatches):
                best = candidate
    logger.warning(f"{gate_id}: derived frame table does not match column {column} ({best.mismatches})")
    return best


@dataclass
class ProtocolResult:
    """
    One run of a measurement-based gate.

    Attributes:
        outcomes: Outcome string, first measurement leftmost
        state: Normalized post-measurement state (uncorrected)
        correction: Frame correction for the outcome string
        probability: Product of the Born factors along the path
        records: Per-measurement records
    """

    outcomes: str
    state: StateVector
    correction: FrameCorrection
    probability: float
    records: List[MeasurementRecord] = field(default_factory=list)


def run_protocol(state: StateVector, gate_id: str, rng: Optional[np.random.Generator] = None,
                 forced: Optional[str] = None, tau: Optional[float] = None,
                 encoding_id: Optional[str] = None) -> ProtocolResult:
    """
    Apply a gate's measurement sequence to a codespace state.

    Args:
        state: Input state, checked against the encoding's sector within 1e-9
        gate_id: Gate to run
        rng: Generator for sampled outcomes
        forced: Outcome string to impose instead of sampling
        tau: Angle for Rz
        encoding_id: Encoding for the identity gate

    Returns:
        ProtocolResult with the frame correction looked up from the derived table
    """
    protocol = build_protocol(*_resolve(gate_id, tau, encoding_id))
    encoding = protocol.encoding
    report = check_codespace(state, encoding.id)
    if not report.in_codespace:
        raise CodespaceError(f"Input state is outside the {encoding.id} codespace: {report.flagged}")
    if forced is not None and len(forced) != protocol.n_measurements:
        raise ValueError(f"Forced string {forced!r} does not fit {protocol.n_measurements} measurements")

    records: List[MeasurementRecord] = []
    probability = 1.0
    for k, axis in enumerate(protocol.axes):
        sign = None if forced is None else (-1 if forced[k] == "1" else 1)
        record, state = measure(state, axis.observable, rng=rng, forced=sign)
        probability *= record.probability
        records.append(record)
    outcomes = "".join(str(r.bit) for r in records)
    correction = protocol.frame_table.get(outcomes)
    if correction is None:
        raise FrameDerivationError(f"{protocol.gate_id}: no frame correction for outcome string {outcomes!r}")
    logger.debug(f"{protocol.gate_id} outcomes {outcomes or '-'} -> correction {correction} (p={probability:.6f})")
    return ProtocolResult(outcomes, state, correction, probability, records)


def post_gate_sector(gate_id: str, outcomes: str, tau: Optional[float] = None,
                     encoding_id: Optional[str] = None) -> Dict[str, int]:
    """
    Expected sector-operator eigenvalues after a branch.

    The operator equal to the final check takes that check's eigenvalue; all
    others keep their encoding value.
    """
    protocol = build_protocol(*_resolve(gate_id, tau, encoding_id))
    sector = {op.name: op.expected for op in protocol.encoding.sector_ops}
    if protocol.axes:
        final = protocol.axes[-1].observable
        if final.is_single_string:
            coefficient, string = final.terms[0]
            for op in protocol.encoding.sector_ops:
                if op.string.letters == string.letters:
                    sector[op.name] = (-1 if outcomes[-1] == "1" else 1) * int(np.sign(coefficient)) * op.string.sign
    return sector
