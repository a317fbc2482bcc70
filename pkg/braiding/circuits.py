"""
Gate-level circuits for the braiding protocols.

Contains the circuit representation, builders for initialization, logical
readout, parity-check fragments, the three-qubit entangler used by the T-type
middle check and full gate circuits, plus circuit simulation with mid-circuit
measurement and optional noise.
"""

import logging
from dataclasses import dataclass, field
from math import isclose, pi
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from simulator import MeasurementRecord, NoiseModel, PauliString, StateVector, measure
from simulator.errors import DimensionError, UnknownGateError
from simulator.noise import apply_gate_noise, apply_idle_noise, flip_readout
from simulator.statevector import GATE_ARITY, PARAMETERIZED_GATES, apply_gate

from .encoding import Junction, get_encoding, normalize_label, parse_labels
from .protocol import GATE_ENCODINGS, MeasurementAxis, gate_sequence, normalize_gate_id

logger = logging.getLogger(__name__)

GATE = "gate"
MEASURE = "measure"
BARRIER = "barrier"
BASES = ("x", "y", "z")
BASIS_GATES = frozenset({"cz", "rx", "rz", "sx", "x", "id"})

# Gate lists that replace transcriptions which miss their target
CIRCUIT_DEVIATIONS: Dict[str, str] = {
    "Y1 init +": "+ preparation without the junction box misses h on qubit 3; the junction initialisation box is used",
    "U023": "direct entangler gate list fails the conjugation identity; rz(tau) cx cx h s cx on (c, y, x) is used",
}


@dataclass(frozen=True)
class Operation:
    """
    One circuit instruction.

    Attributes:
        kind: "gate", "measure" or "barrier"
        name: Gate name (gates only)
        qubits: Qubit indices (controls first); empty barrier = all qubits
        params: Gate angles in radians
        basis: Measurement basis "x", "y" or "z"
        clbit: Classical bit written by a measurement
        window: Qubits active during a measurement window (metadata for idle noise)
    """

    kind: str
    name: str = ""
    qubits: Tuple[int, ...] = ()
    params: Tuple[float, ...] = ()
    basis: str = "z"
    clbit: int = -1
    window: Tuple[int, ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        if self.kind == MEASURE:
            return f"measure_{self.basis} q[{self.qubits[0]}] -> c[{self.clbit}]"
        if self.kind == BARRIER:
            return "barrier"
        args = f"({', '.join(f'{p:.6g}' for p in self.params)})" if self.params else ""
        return f"{self.name}{args} {', '.join(f'q[{q}]' for q in self.qubits)}"


@dataclass
class Circuit:
    """
    Ordered list of operations on n_qubits qubits and n_clbits classical bits.

    Attributes:
        n_qubits: Number of qubits
        n_clbits: Number of classical bits
        ops: Operations in time order
    """

    n_qubits: int
    n_clbits: int = 0
    ops: List[Operation] = field(default_factory=list)

    def _check_qubits(self, qubits: Sequence[int]) -> Tuple[int, ...]:
        qubits = tuple(int(q) for q in qubits)
        for q in qubits:
            if not 0 <= q < self.n_qubits:
                raise DimensionError(f"Qubit {q} out of range for {self.n_qubits} qubits")
        return qubits

    def append(self, op: Operation) -> "Circuit":
        self._check_qubits(op.qubits)
        if op.kind == GATE:
            if op.name not in GATE_ARITY:
                raise UnknownGateError(f"Unknown gate: {op.name}")
            if len(op.qubits) != GATE_ARITY[op.name]:
                raise DimensionError(f"Gate {op.name} acts on {GATE_ARITY[op.name]} qubits, got {len(op.qubits)}")
            if len(set(op.qubits)) != len(op.qubits):
                raise DimensionError(f"Gate {op.name} needs distinct qubits, got {op.qubits}")
            if (op.name in PARAMETERIZED_GATES) != bool(op.params):
                raise ValueError(f"Gate {op.name} has wrong parameter count {len(op.params)}")
        elif op.kind == MEASURE:
            if op.basis not in BASES:
                raise ValueError(f"Unknown measurement basis: {op.basis!r}")
            if not 0 <= op.clbit < self.n_clbits:
                raise DimensionError(f"Classical bit {op.clbit} out of range for {self.n_clbits} bits")
            if any(o.kind == MEASURE and o.clbit == op.clbit for o in self.ops):
                raise ValueError(f"Classical bit {op.clbit} is written twice")
        elif op.kind != BARRIER:
            raise ValueError(f"Unknown operation kind: {op.kind!r}")
        self.ops.append(op)
        return self

    def gate(self, name: str, *qubits: int, params: Sequence[float] = ()) -> "Circuit":
        return self.append(Operation(GATE, name, tuple(qubits), tuple(float(p) for p in params)))

    def measure(self, qubit: int, clbit: int, basis: str = "z", window: Sequence[int] = ()) -> "Circuit":
        return self.append(Operation(MEASURE, "measure", (qubit,), (), basis, clbit, tuple(window)))

    def barrier(self, *qubits: int) -> "Circuit":
        return self.append(Operation(BARRIER, "barrier", tuple(qubits)))

    def compose(self, other: "Circuit") -> "Circuit":
        """Append every operation of `other` (same qubit count, classical bits must fit)."""
        if other.n_qubits != self.n_qubits:
            raise DimensionError(f"Cannot compose {other.n_qubits}-qubit circuit onto {self.n_qubits} qubits")
        if other.n_clbits > self.n_clbits:
            raise DimensionError(f"Fragment writes {other.n_clbits} classical bits, circuit has {self.n_clbits}")
        for op in other.ops:
            self.append(op)
        return self

    def inverse(self) -> "Circuit":
        """Inverse of a measurement-free circuit."""
        result = Circuit(self.n_qubits, self.n_clbits)
        for op in reversed(self.ops):
            if op.kind == MEASURE:
                raise ValueError("Cannot invert a circuit containing measurements")
            if op.kind == BARRIER:
                result.append(op)
                continue
            name, params = _INVERSES.get(op.name, op.name), op.params
            if op.name in PARAMETERIZED_GATES:
                params = tuple(-p for p in op.params)
            result.append(Operation(GATE, name, op.qubits, params))
        return result

    def count_ops(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for op in self.ops:
            key = op.name if op.kind == GATE else op.kind
            counts[key] = counts.get(key, 0) + 1
        return counts

    @property
    def measurements(self) -> List[Operation]:
        return [op for op in self.ops if op.kind == MEASURE]


_INVERSES = {"s": "sdg", "sdg": "s", "t": "tdg", "tdg": "t", "sx": "sxdg", "sxdg": "sx"}


def _circuit(n: int, gates: Sequence[tuple]) -> Circuit:
    """Circuit from (name, qubits) or (name, qubits, angle) tuples."""
    circuit = Circuit(n)
    for entry in gates:
        name, qubits = entry[0], entry[1]
        params = entry[2:] if len(entry) > 2 else ()
        circuit.gate(name, *qubits, params=params)
    return circuit


# Initialization gate lists, time order
_Y1_INIT = {
    "0": [("ry", (2,), pi / 2), ("ry", (1,), -pi / 2), ("x", (0,)), ("cy", (1, 0)), ("cx", (2, 0)),
          ("cx", (2, 1)), ("cx", (2, 3)), ("x", (2,))],
    "1": [("h", (2,)), ("x", (1,)), ("rx", (0,), pi / 2), ("cx", (0, 3)), ("cx", (2, 0)), ("cx", (0, 1)),
          ("cx", (0, 3))],
    "+": [("h", (2,)), ("x", (1,)), ("rx", (0,), pi / 2), ("cx", (0, 3)), ("h", (3,)), ("cx", (2, 0)),
          ("cx", (0, 1)), ("cz", (1, 2))],
    "i+": [("h", (2,)), ("x", (1,)), ("rx", (0,), pi / 2), ("s", (1,)), ("cx", (0, 3)), ("h", (3,)),
           ("cx", (2, 0)), ("sdg", (3,)), ("sdg", (2,)), ("cx", (0, 1)), ("cz", (1, 2)), ("cz", (2, 3))],
}
UNBOXED_Y1_PLUS = [("h", (2,)), ("x", (1,)), ("rx", (0,), pi / 2), ("cx", (0, 3)), ("cx", (2, 0)),
                   ("cx", (0, 1)), ("cz", (1, 2))]

_Y2_INIT_Q0 = {
    "0": [("h", (5,)), ("x", (4,)), ("x", (3,)), ("h", (2,)), ("h", (1,)), ("cx", (5, 4)), ("sdg", (3,)),
          ("cy", (2, 3)), ("cx", (1, 3)), ("cx", (1, 2)), ("z", (2,)), ("cx", (1, 0)), ("y", (1,))],
    "1": [("h", (5,)), ("x", (4,)), ("h", (2,)), ("h", (1,)), ("z", (5,)), ("cy", (2, 3)), ("cx", (5, 4)),
          ("cx", (1, 3)), ("cx", (1, 2)), ("z", (2,)), ("cx", (1, 0)), ("y", (1,))],
    "+": [("h", (5,)), ("x", (4,)), ("h", (3,)), ("h", (2,)), ("h", (1,)), ("z", (5,)), ("s", (3,)),
          ("cx", (5, 4)), ("cy", (2, 3)), ("cx", (1, 3)), ("z", (3,)), ("cx", (1, 2)), ("cz", (5, 3)),
          ("cx", (1, 0)), ("cz", (5, 2)), ("y", (1,))],
    "i+": [("h", (5,)), ("x", (4,)), ("h", (3,)), ("h", (2,)), ("h", (1,)), ("z", (5,)), ("cy", (2, 3)),
           ("cx", (5, 4)), ("cx", (1, 3)), ("z", (3,)), ("cx", (1, 2)), ("cz", (5, 3)), ("cx", (1, 0)),
           ("cz", (5, 2)), ("ry", (1,), -pi)],
}
_Y2_INIT_Q1 = {
    "0": [("x", (9,)), ("x", (8,)), ("h", (7,)), ("sx", (6,)), ("cx", (6, 8)), ("cx", (7, 6)), ("cx", (6, 9)),
          ("cx", (6, 8))],
    "1": [("x", (8,)), ("h", (7,)), ("sx", (6,)), ("cx", (6, 8)), ("cx", (7, 6)), ("cx", (6, 9)), ("z", (7,)),
          ("cx", (6, 8))],
    "+": [("h", (9,)), ("x", (8,)), ("h", (7,)), ("sx", (6,)), ("cx", (6, 8)), ("cy", (7, 6)), ("s", (7,)),
          ("cx", (6, 9)), ("cx", (6, 8)), ("cz", (9, 7)), ("z", (8,))],
    "i+": [("h", (9,)), ("x", (8,)), ("h", (7,)), ("sx", (6,)), ("sdg", (9,)), ("cx", (6, 8)), ("cy", (7, 6)),
           ("s", (7,)), ("cx", (6, 9)), ("cx", (6, 8)), ("cz", (9, 7)), ("z", (8,))],
}

# Logical Z up to sign, used to reach "-" and "i-" from "+" and "i+"
_LOGICAL_Z_GATES = {("Y1", 0): (2, 3), ("Y2", 0): (2, 3), ("Y2", 1): (6, 9)}
_NEGATED = {"-": "+", "i-": "i+"}


def build_init_circuit(encoding_id: str, labels: Sequence[str]) -> Circuit:
    """
    Circuit preparing a logical label state from |0...0>.

    Labels "-" and "i-" are reached by a logical Z after "+" and "i+".
    """
    encoding = get_encoding(encoding_id)
    if isinstance(labels, str):
        labels = parse_labels(labels)
    labels = tuple(normalize_label(label) for label in labels)
    if len(labels) != encoding.n_logical:
        raise ValueError(f"Encoding {encoding_id} needs {encoding.n_logical} labels, got {len(labels)}")
    tables = [_Y1_INIT] if encoding_id == "Y1" else [_Y2_INIT_Q0, _Y2_INIT_Q1]
    circuit = Circuit(encoding.physical_n)
    for k, (table, label) in enumerate(zip(tables, labels)):
        circuit.compose(_circuit(encoding.physical_n, table[_NEGATED.get(label, label)]))
        if label in _NEGATED:
            for q in _LOGICAL_Z_GATES[(encoding_id, k)]:
                circuit.gate("z", q)
    return circuit


# (gates, measured qubit, basis) per (encoding, logical qubit, axis)
READOUT_CIRCUITS = {
    ("Y1", 0, "X"): ([("cx", (3, 2))], 2, "y"),
    ("Y1", 0, "Y"): ([], 2, "x"),
    ("Y1", 0, "Z"): ([("cx", (3, 2))], 2, "z"),
    ("Y2", 0, "X"): ([("cz", (5, 2))], 2, "x"),
    ("Y2", 0, "Y"): ([("cz", (3, 2)), ("cz", (5, 2))], 2, "y"),
    ("Y2", 0, "Z"): ([("cx", (2, 3))], 3, "z"),
    ("Y2", 1, "X"): ([], 6, "y"),
    ("Y2", 1, "Y"): ([("cz", (9, 6))], 6, "x"),
    ("Y2", 1, "Z"): ([("cx", (6, 9))], 9, "z"),
}


def build_readout_circuit(encoding_id: str, qubit: int, axis: str, clbit: int = 0,
                          n_clbits: Optional[int] = None) -> Circuit:
    """
    Logical-basis measurement of one logical qubit.

    The measured physical observable is the phase-stripped logical observable;
    the logical value is its sign times the recorded eigenvalue.
    """
    encoding = get_encoding(encoding_id)
    key = (encoding_id, qubit, axis.upper())
    if key not in READOUT_CIRCUITS:
        raise ValueError(f"No readout circuit for logical qubit {qubit} axis {axis!r} of {encoding_id}")
    gates, measured, basis = READOUT_CIRCUITS[key]
    circuit = _circuit(encoding.physical_n, gates)
    circuit.n_clbits = max(clbit + 1, n_clbits or 0)
    circuit.measure(measured, clbit, basis)
    return circuit


def build_parity_check(axis: MeasurementAxis, clbit: int = 0, n_clbits: Optional[int] = None) -> Circuit:
    """
    Two-qubit check A_m A_o measured on the junction center m.

    X/Y checks: controlled-A(m -> o), measure A on m, controlled-A(m -> o).
    ZZ check: cx(o -> m), measure z on m, cx(o -> m).
    """
    observable = axis.observable
    if not observable.is_single_string:
        raise ValueError(f"Axis {axis.label()} is not a single Pauli string; use build_u023")
    coefficient, string = observable.terms[0]
    if not isclose(coefficient, 1.0, abs_tol=1e-12):
        raise ValueError(f"Axis {axis.label()} has coefficient {coefficient:+.3g}; only +1 checks are supported")
    junction = axis.junction
    m = junction.center
    others = [q for q in string.support if q != m]
    if len(others) != 1 or string.letters[m] != string.letters[others[0]]:
        raise ValueError(f"{string} is not a junction parity check")
    o, letter = others[0], string.letters[m]
    circuit = Circuit(junction.n, max(clbit + 1, n_clbits or 0))
    if letter == "Z":
        entangler = ("cx", (o, m))
    else:
        entangler = ("c" + letter.lower(), (m, o))
    circuit.gate(entangler[0], *entangler[1])
    circuit.measure(m, clbit, letter.lower(), window=(m, o))
    circuit.gate(entangler[0], *entangler[1])
    return circuit


def build_u023(tau: float, junction: Optional[Junction] = None) -> Circuit:
    """
    Three-qubit entangler U with U X_c U† = cos(tau) X_c X_x + sin(tau) Y_c Y_y.

    tau = 0 reduces to cx(c -> x) and tau = pi/2 to s(c), cy(c -> y).
    """
    if not np.isfinite(tau):
        raise ValueError(f"tau must be finite, got {tau}")
    junction = junction or get_encoding("Y1").junction
    c, y, x = junction.center, junction.y, junction.x
    circuit = Circuit(junction.n)
    reduced = tau % (2 * pi)
    if isclose(reduced, 0.0, abs_tol=1e-12) or isclose(reduced, 2 * pi, abs_tol=1e-12):
        return circuit.gate("cx", c, x)
    if isclose(reduced, pi / 2, abs_tol=1e-12):
        return circuit.gate("s", c).gate("cy", c, y)
    circuit.gate("rz", c, params=(tau,))
    circuit.gate("cx", c, x)
    circuit.gate("cx", y, c)
    circuit.gate("h", y)
    circuit.gate("s", y)
    circuit.gate("cx", y, x)
    return circuit


def build_u023_check(axis: MeasurementAxis, clbit: int = 0, n_clbits: Optional[int] = None) -> Circuit:
    """Check P(pi/2, phi) as U†, measure x on the center, U."""
    if not isclose(axis.theta, pi / 2, abs_tol=1e-12):
        raise ValueError(f"Axis {axis.label()} is not an equatorial check")
    junction = axis.junction
    unitary = build_u023(axis.phi, junction)
    circuit = Circuit(junction.n, max(clbit + 1, n_clbits or 0))
    circuit.compose(unitary.inverse())
    circuit.measure(junction.center, clbit, "x", window=(junction.center, junction.y, junction.x))
    circuit.compose(unitary)
    return circuit


def build_check(axis: MeasurementAxis, clbit: int = 0, n_clbits: Optional[int] = None) -> Circuit:
    """Parity fragment for single-string axes, entangler-conjugated check otherwise."""
    if axis.observable.is_single_string:
        return build_parity_check(axis, clbit, n_clbits)
    return build_u023_check(axis, clbit, n_clbits)


def build_gate_circuit(gate_id: str, labels: Sequence[str], tau: Optional[float] = None) -> Circuit:
    """Initialization, a barrier, then one check fragment per measurement (clbit k = measurement k)."""
    gate_id = normalize_gate_id(gate_id)
    if isinstance(labels, str):
        labels = parse_labels(labels)
    if gate_id == "I":
        encoding_id = "Y2" if len(labels) == 2 else "Y1"
    else:
        encoding_id = GATE_ENCODINGS[gate_id]
    axes = gate_sequence(gate_id, tau, encoding_id)
    circuit = build_init_circuit(encoding_id, labels)
    circuit.n_clbits = len(axes)
    circuit.barrier()
    for k, axis in enumerate(axes):
        circuit.compose(build_check(axis, k, len(axes)))
    return circuit


@dataclass
class CircuitResult:
    """
    Outcome of one circuit simulation.

    Attributes:
        state: Final state
        clbits: Recorded bits, character j = classical bit j
        probability: Product of Born factors of the measurement outcomes
        records: Measurement records in time order (recorded eigenvalues)
    """

    state: StateVector
    clbits: str
    probability: float
    records: List[MeasurementRecord] = field(default_factory=list)


def simulate_circuit(circuit: Circuit, state: Optional[StateVector] = None, forced: Optional[str] = None,
                     rng: Optional[np.random.Generator] = None, noise: Optional[NoiseModel] = None,
                     noise_rng: Optional[np.random.Generator] = None) -> CircuitResult:
    """
    Run a circuit on a statevector.

    Args:
        circuit: Circuit to run
        state: Initial state (default |0...0>)
        forced: Outcome bits to impose, character j for classical bit j
        rng: Generator for sampled outcomes
        noise: Optional noise model (gate, idle, readout)
        noise_rng: Generator for noise draws, kept separate from rng

    Returns:
        CircuitResult with the final state and recorded bits
    """
    state = state.copy() if state is not None else StateVector.zero(circuit.n_qubits)
    if state.n != circuit.n_qubits:
        raise DimensionError(f"Circuit acts on {circuit.n_qubits} qubits, state has {state.n}")
    if forced is not None and len(forced) != circuit.n_clbits:
        raise ValueError(f"Forced string {forced!r} does not fit {circuit.n_clbits} classical bits")
    noisy = noise is not None and not noise.is_noiseless
    if noisy and noise_rng is None:
        noise_rng = np.random.default_rng()

    bits = ["0"] * circuit.n_clbits
    probability = 1.0
    records: List[MeasurementRecord] = []
    for op in circuit.ops:
        if op.kind == GATE:
            state = apply_gate(state, op.name, op.qubits, op.params)
            if noisy:
                state = apply_gate_noise(state, op.qubits, noise, noise_rng)
        elif op.kind == MEASURE:
            observable = PauliString.from_sparse(circuit.n_qubits, {op.qubits[0]: op.basis.upper()})
            sign = None if forced is None else (-1 if forced[op.clbit] == "1" else 1)
            record, state = measure(state, observable, rng=rng, forced=sign)
            probability *= record.probability
            if noisy:
                if op.window:
                    idle = [q for q in range(circuit.n_qubits) if q not in op.window]
                    state = apply_idle_noise(state, idle, noise, noise_rng)
                record = flip_readout(record, noise.p_ro, noise_rng)
            bits[op.clbit] = str(record.bit)
            records.append(record)
    return CircuitResult(state, "".join(bits), probability, records)


def circuit_matrix(circuit: Circuit) -> np.ndarray:
    """Unitary of a measurement-free circuit, columns indexed by input basis state."""
    if circuit.measurements:
        raise ValueError("circuit_matrix needs a measurement-free circuit")
    dim = 1 << circuit.n_qubits
    columns = []
    for index in range(dim):
        columns.append(simulate_circuit(circuit, StateVector.basis(circuit.n_qubits, index)).state.amps)
    return np.stack(columns, axis=1)


# Lowering rules into {cz, rx, rz, sx, x, id}; entries are (name, qubit positions, angle)
_ROTATIONS = {"s": pi / 2, "sdg": -pi / 2, "t": pi / 4, "tdg": -pi / 4, "z": pi}
_CCX = [("h", 2), ("cx", 1, 2), ("tdg", 2), ("cx", 0, 2), ("t", 2), ("cx", 1, 2), ("tdg", 2), ("cx", 0, 2),
        ("t", 1), ("t", 2), ("h", 2), ("cx", 0, 1), ("t", 0), ("tdg", 1), ("cx", 0, 1)]


def _lower_gate(op: Operation) -> List[Operation]:
    q = op.qubits

    def g(name: str, *qubits: int, params: Tuple[float, ...] = ()) -> Operation:
        return Operation(GATE, name, tuple(qubits), params)

    name = op.name
    if name in BASIS_GATES:
        return [op]
    if name in _ROTATIONS:
        return [g("rz", q[0], params=(_ROTATIONS[name],))]
    if name == "h":
        return [g("rz", q[0], params=(pi / 2,)), g("sx", q[0]), g("rz", q[0], params=(pi / 2,))]
    if name == "y":
        return [g("rz", q[0], params=(pi,)), g("x", q[0])]
    if name == "sxdg":
        return [g("rx", q[0], params=(-pi / 2,))]
    if name == "ry":
        return [g("rz", q[0], params=(-pi / 2,)), g("rx", q[0], params=op.params), g("rz", q[0], params=(pi / 2,))]
    if name == "cx":
        return _lower_ops([g("h", q[1]), g("cz", q[0], q[1]), g("h", q[1])])
    if name == "cy":
        return _lower_ops([g("sdg", q[1]), g("cx", q[0], q[1]), g("s", q[1])])
    if name == "ccx":
        return _lower_ops([g(step[0], *(q[i] for i in step[1:])) for step in _CCX])
    raise UnknownGateError(f"No lowering rule for gate: {name}")


def _lower_ops(ops: Sequence[Operation]) -> List[Operation]:
    lowered: List[Operation] = []
    for op in ops:
        if op.kind == GATE:
            lowered.extend(_lower_gate(op))
        elif op.kind == MEASURE and op.basis != "z":
            q = op.qubits[0]
            before = [Operation(GATE, "h", (q,))] if op.basis == "x" else \
                [Operation(GATE, "sdg", (q,)), Operation(GATE, "h", (q,))]
            after = [Operation(GATE, "h", (q,))] if op.basis == "x" else \
                [Operation(GATE, "h", (q,)), Operation(GATE, "s", (q,))]
            lowered.extend(_lower_ops(before))
            lowered.append(Operation(MEASURE, "measure", op.qubits, (), "z", op.clbit, op.window))
            lowered.extend(_lower_ops(after))
        else:
            lowered.append(op)
    return lowered


def lower_to_basis(circuit: Circuit) -> Circuit:
    """Equivalent circuit (up to global phase) over {cz, rx, rz, sx, x, id} with z-basis measurements."""
    lowered = Circuit(circuit.n_qubits, circuit.n_clbits)
    for op in _lower_ops(circuit.ops):
        lowered.append(op)
    logger.debug(f"Lowered {len(circuit.ops)} operations to {len(lowered.ops)}")
    return lowered


def random_circuit(n_qubits: int, depth: int, rng: np.random.Generator, measure_fraction: float = 0.2) -> Circuit:
    """Random circuit over the supported gate set with occasional mid-circuit measurements."""
    names = sorted(GATE_ARITY)
    n_clbits = depth
    circuit = Circuit(n_qubits, n_clbits)
    clbit = 0
    for _ in range(depth):
        if rng.random() < measure_fraction:
            qubit = int(rng.integers(n_qubits))
            circuit.measure(qubit, clbit, str(rng.choice(BASES)))
            clbit += 1
            continue
        name = str(rng.choice([n for n in names if GATE_ARITY[n] <= n_qubits]))
        qubits = rng.choice(n_qubits, size=GATE_ARITY[name], replace=False)
        params = (float(rng.uniform(-2 * pi, 2 * pi)),) if name in PARAMETERIZED_GATES else ()
        circuit.gate(name, *(int(q) for q in qubits), params=params)
    circuit.n_clbits = max(clbit, 1)
    return circuit


def circuit_catalog() -> Dict[str, Circuit]:
    """Every named circuit of the library: initialization, readout, entangler and one full gate circuit per gate."""
    catalog: Dict[str, Circuit] = {}
    for encoding_id, tables in (("Y1", [_Y1_INIT]), ("Y2", [_Y2_INIT_Q0, _Y2_INIT_Q1])):
        n_logical = len(tables)
        for label in ("0", "1", "+", "-", "i+", "i-"):
            labels = (label,) * n_logical
            catalog[f"init {encoding_id} {','.join(labels)}"] = build_init_circuit(encoding_id, labels)
    for (encoding_id, qubit, axis) in READOUT_CIRCUITS:
        catalog[f"readout {encoding_id} q{qubit} {axis}"] = build_readout_circuit(encoding_id, qubit, axis)
    for tau, name in ((0.0, "0"), (pi / 8, "pi/8"), (pi / 4, "pi/4"), (pi / 2, "pi/2")):
        catalog[f"u023 {name}"] = build_u023(tau)
    for gate_id in ("S", "Sdg", "T", "Tdg", "RxxP", "RxxM"):
        labels = ("+",) * get_encoding(GATE_ENCODINGS[gate_id]).n_logical
        catalog[f"gate {gate_id}"] = build_gate_circuit(gate_id, labels)
    return catalog
