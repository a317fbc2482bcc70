"""
Logical encodings on Kitaev-junction qubits.

Two encodings are provided:
    Y1: one logical qubit on four physical qubits (a single Y-junction)
    Y2: two logical qubits on ten physical qubits, with an ancilla junction
        (center qubit 5) used for the entangling gate

Ket strings below are written with the leftmost character on qubit 0 unless a
qubit map is given.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import cos, isclose, sin, sqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from simulator import PauliString, PauliSum, StateVector, expectation
from simulator.errors import DimensionError

logger = logging.getLogger(__name__)

ENCODING_IDS = ("Y1", "Y2")
AXES = ("X", "Y", "Z")
SECTOR = "sector"
LABEL = "label"
CODESPACE_TOLERANCE = 1e-9

# Single-qubit label -> logical amplitudes (|0>_L, |1>_L)
_LABEL_VECTORS: Dict[str, np.ndarray] = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / sqrt(2),
    "-": np.array([1, -1], dtype=complex) / sqrt(2),
    "i+": np.array([1, 1j], dtype=complex) / sqrt(2),
    "i-": np.array([1, -1j], dtype=complex) / sqrt(2),
}
CANONICAL_LABELS = ("0", "1", "+", "i+")
LABEL_ALIASES = {"+i": "i+", "-i": "i-", "i": "i+", "plus": "+", "minus": "-"}


@dataclass(frozen=True)
class Junction:
    """
    A Y-junction: a center qubit coupled along z, y and x to three neighbours.

    Attributes:
        center: Qubit measured by every check of the junction
        z: Partner of the Z-type coupling
        y: Partner of the Y-type coupling
        x: Partner of the X-type coupling
        n: Number of physical qubits the strings act on
    """

    center: int
    z: int
    y: int
    x: int
    n: int

    def pair(self, letter: str) -> PauliString:
        partner = {"Z": self.z, "Y": self.y, "X": self.x}[letter]
        return PauliString.from_sparse(self.n, {self.center: letter, partner: letter})

    def coupling(self, theta: float, phi: float) -> PauliSum:
        """cos(theta) ZZ + sin(theta) sin(phi) YY + sin(theta) cos(phi) XX on the junction pairs."""
        terms = [
            (cos(theta), self.pair("Z")),
            (sin(theta) * sin(phi), self.pair("Y")),
            (sin(theta) * cos(phi), self.pair("X")),
        ]
        return PauliSum.from_terms(terms)

    def to_dict(self) -> Dict[str, int]:
        return {"center": self.center, "z": self.z, "y": self.y, "x": self.x}


@dataclass(frozen=True)
class GaugeOperator:
    """
    A conserved Pauli string of an encoding.

    Attributes:
        name: Short name, e.g. "W1", "h", "n0"
        string: Signed Pauli string
        role: "sector" (same eigenvalue on every logical state) or "label"
        expected: Sector eigenvalue (None for label operators)
    """

    name: str
    string: PauliString
    role: str
    expected: Optional[int] = None


@dataclass(frozen=True, eq=False)
class LogicalEncoding:
    """
    Analytic logical encoding.

    Attributes:
        id: "Y1" or "Y2"
        physical_n: Number of physical qubits
        n_logical: Number of logical qubits
        junction: Junction whose checks implement the encoding's gates
        gauge_ops: Conserved operators with their roles
        logical_ops: Per logical qubit, {"X", "Y", "Z"} -> signed Pauli string
        basis: Logical basis states, index a = sum a_k 2^k
        gauge_links: Link-variable choices fixing the gauge
    """

    id: str
    physical_n: int
    n_logical: int
    junction: Junction
    gauge_ops: Tuple[GaugeOperator, ...]
    logical_ops: Tuple[Dict[str, PauliString], ...]
    basis: Tuple[np.ndarray, ...] = field(repr=False)
    gauge_links: Dict[str, int] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return 1 << self.n_logical

    def gauge(self, name: str) -> GaugeOperator:
        for op in self.gauge_ops:
            if op.name == name:
                return op
        raise KeyError(f"Encoding {self.id} has no gauge operator {name!r}")

    @property
    def sector_ops(self) -> Tuple[GaugeOperator, ...]:
        return tuple(op for op in self.gauge_ops if op.role == SECTOR)

    def basis_state(self, index: int) -> StateVector:
        return StateVector(self.physical_n, self.basis[index].copy())


def _ket(n: int, terms: Sequence[Tuple[complex, str]], qubit_map: Optional[Sequence[int]] = None) -> np.ndarray:
    """Amplitude vector from (coefficient, ket-string) pairs."""
    amps = np.zeros(1 << n, dtype=complex)
    for coefficient, bits in terms:
        index = 0
        for k, bit in enumerate(bits):
            if bit == "1":
                index |= 1 << (qubit_map[k] if qubit_map else k)
        amps[index] += coefficient
    return amps


def _y1_basis() -> Tuple[np.ndarray, np.ndarray]:
    zero = _ket(4, [(0.5, "0101"), (0.5, "1010"), (0.5j, "0110"), (0.5j, "1001")])
    one = _ket(4, [(0.5, "0100"), (0.5, "1011"), (-0.5j, "0111"), (-0.5j, "1000")])
    return zero, one


def _y2_basis() -> Tuple[np.ndarray, ...]:
    r = sqrt(2) / 4
    q0_zero = _ket(6, [
        (r, "010101"), (r, "010110"), (r, "101001"), (r, "101010"),
        (1j * r, "011001"), (1j * r, "011010"), (1j * r, "100101"), (1j * r, "100110"),
    ])
    q0_one = _ket(6, [
        (-r, "011101"), (r, "011110"), (-r, "100001"), (r, "100010"),
        (-1j * r, "010001"), (1j * r, "010010"), (-1j * r, "101101"), (1j * r, "101110"),
    ])
    # Second logical qubit lives on physical qubits 6..9; ket characters address 7, 8, 9, 6
    ip, im = r * (1 + 1j), r * (-1 + 1j)
    q1_zero = _ket(4, [(ip, "0110"), (ip, "1001"), (-im, "0101"), (-im, "1010")], qubit_map=(1, 2, 3, 0))
    q1_one = -PauliString("YIII").apply(q1_zero)
    # Qubit 0 least significant: the high block (qubits 6..9) is the left Kronecker factor
    return tuple(np.kron(q1, q0) for q1 in (q1_zero, q1_one) for q0 in (q0_zero, q0_one))


def _gauge(name: str, letters: str, role: str = SECTOR, expected: Optional[int] = -1) -> GaugeOperator:
    return GaugeOperator(name, PauliString(letters), role, expected if role == SECTOR else None)


def _build_y1() -> LogicalEncoding:
    return LogicalEncoding(
        id="Y1",
        physical_n=4,
        n_logical=1,
        junction=Junction(center=0, z=1, y=2, x=3, n=4),
        gauge_ops=(
            _gauge("W1", "ZIXY"),
            _gauge("W2", "XYZI", role=LABEL),
            _gauge("W3", "YXIZ"),
            _gauge("h", "ZZII"),
            _gauge("n", "IIZZ", role=LABEL),
        ),
        logical_ops=({
            "X": PauliString.from_label("+IIYZ"),
            "Y": PauliString.from_label("+IIXI"),
            "Z": PauliString.from_label("-IIZZ"),
        },),
        basis=_y1_basis(),
        gauge_links={"u^z_01": -1, "u^y_02": -1, "u^x_03": -1},
    )


def _build_y2() -> LogicalEncoding:
    return LogicalEncoding(
        id="Y2",
        physical_n=10,
        n_logical=2,
        junction=Junction(center=5, z=4, y=6, x=2, n=10),
        gauge_ops=(
            _gauge("W1", "YXIZIIIIII"),
            _gauge("W2", "ZIXYIIIIII"),
            _gauge("W3", "IIIIIIIXYZ"),
            _gauge("W4", "IIIIIIYZIX"),
            _gauge("W5", "XYZIYYIIII"),
            _gauge("h0", "ZZIIIIIIII"),
            _gauge("h1", "IIIIIIIZZI"),
            _gauge("hA", "IIIIZZIIII"),
            _gauge("n0", "IIZZIIIIII", role=LABEL),
            _gauge("n1", "IIIIIIZIIZ", role=LABEL),
        ),
        logical_ops=(
            {
                "X": PauliString.from_label("+IIXIIZIIII"),
                "Y": PauliString.from_label("-IIYZIZIIII"),
                "Z": PauliString.from_label("-IIZZIIIIII"),
            },
            {
                "X": PauliString.from_label("-IIIIIIYIII"),
                "Y": PauliString.from_label("-IIIIIIXIIZ"),
                "Z": PauliString.from_label("-IIIIIIZIIZ"),
            },
        ),
        basis=_y2_basis(),
        gauge_links={"u^z_01": -1, "u^y_02": -1, "u^x_03": -1, "u^z_23": -1},
    )


@lru_cache(maxsize=None)
def get_encoding(encoding_id: str) -> LogicalEncoding:
    """Return the (cached, immutable) encoding for "Y1" or "Y2"."""
    builders = {"Y1": _build_y1, "Y2": _build_y2}
    if encoding_id not in builders:
        raise ValueError(f"Unknown encoding: {encoding_id!r} (expected one of {ENCODING_IDS})")
    logger.debug(f"Building encoding {encoding_id}")
    return builders[encoding_id]()


def normalize_label(label: str) -> str:
    key = label.strip().replace("−", "-")
    key = LABEL_ALIASES.get(key, key)
    if key not in _LABEL_VECTORS:
        raise ValueError(f"Unknown logical label: {label!r} (expected one of {sorted(_LABEL_VECTORS)})")
    return key


def parse_labels(text: str) -> Tuple[str, ...]:
    """Parse CLI label text such as "+" or "0,1"."""
    return tuple(normalize_label(part) for part in text.split(","))


def canonical_inputs(encoding_id: str) -> List[Tuple[str, ...]]:
    """The 4 (Y1) or 16 (Y2) canonical input labels, logical qubit 0 varying slowest."""
    encoding = get_encoding(encoding_id)
    return [tuple(labels) for labels in product(CANONICAL_LABELS, repeat=encoding.n_logical)]


def logical_vector(labels: Sequence[str]) -> np.ndarray:
    """Logical amplitudes for per-qubit labels, index a = sum a_k 2^k."""
    vector = np.array([1], dtype=complex)
    for label in labels:
        vector = np.kron(_LABEL_VECTORS[normalize_label(label)], vector)
    return vector


def from_logical(encoding: LogicalEncoding, coefficients: np.ndarray) -> StateVector:
    """Physical state sum_a c_a |a>_L."""
    coefficients = np.asarray(coefficients, dtype=complex)
    if coefficients.shape != (encoding.dim,):
        raise DimensionError(f"Encoding {encoding.id} needs {encoding.dim} logical amplitudes")
    amps = sum(c * b for c, b in zip(coefficients, encoding.basis))
    return StateVector(encoding.physical_n, amps)


def to_logical(state: StateVector, encoding: LogicalEncoding) -> np.ndarray:
    """Logical amplitudes <a_L|psi> of a state in the input sector."""
    if state.n != encoding.physical_n:
        raise DimensionError(f"Encoding {encoding.id} acts on {encoding.physical_n} qubits, state has {state.n}")
    return np.array([np.vdot(b, state.amps) for b in encoding.basis])


def build_logical_state(encoding_id: str, labels: Sequence[str]) -> StateVector:
    """
    Analytic logical state from per-qubit labels.

    Args:
        encoding_id: "Y1" or "Y2"
        labels: One label per logical qubit from {0, 1, +, -, i+, i-}

    Returns:
        Normalized physical StateVector
    """
    encoding = get_encoding(encoding_id)
    if isinstance(labels, str):
        labels = parse_labels(labels)
    if len(labels) != encoding.n_logical:
        raise ValueError(f"Encoding {encoding_id} needs {encoding.n_logical} labels, got {len(labels)}")
    return from_logical(encoding, logical_vector(labels))


def logical_observable(encoding_id: str, qubit: int, axis: str) -> PauliString:
    """Signed physical Pauli string acting as logical X, Y or Z on one logical qubit."""
    encoding = get_encoding(encoding_id)
    axis = axis.upper()
    if axis not in AXES:
        raise ValueError(f"Unknown axis: {axis!r}")
    if not 0 <= qubit < encoding.n_logical:
        raise ValueError(f"Encoding {encoding_id} has no logical qubit {qubit}")
    return encoding.logical_ops[qubit][axis]


def logical_pauli(encoding: LogicalEncoding, label: str) -> PauliString:
    """Physical string for a logical Pauli label (character k acts on logical qubit k)."""
    if len(label) != encoding.n_logical:
        raise DimensionError(f"Logical label {label!r} needs {encoding.n_logical} characters")
    result = PauliString.identity(encoding.physical_n)
    for k, letter in enumerate(label):
        if letter != "I":
            result = result * encoding.logical_ops[k][letter]
    return result


@dataclass
class GaugeReading:
    """One row of a codespace report."""

    name: str
    string: str
    role: str
    value: float
    expected: Optional[int]
    flagged: bool


@dataclass
class CodespaceReport:
    """
    Gauge-operator expectations of a state.

    Attributes:
        encoding_id: Encoding checked against
        readings: One reading per gauge operator
    """

    encoding_id: str
    readings: List[GaugeReading]

    @property
    def in_codespace(self) -> bool:
        return not any(r.flagged for r in self.readings)

    @property
    def flagged(self) -> List[str]:
        return [r.name for r in self.readings if r.flagged]

    def values(self) -> Dict[str, float]:
        return {r.name: r.value for r in self.readings}


def check_codespace(state: StateVector, encoding_id: str, sector: Optional[Dict[str, int]] = None,
                    tol: float = CODESPACE_TOLERANCE) -> CodespaceReport:
    """
    Evaluate every gauge operator on a state.

    Sector operators are flagged when they deviate from their expected
    eigenvalue (or the override in `sector`); label operators are reported only.
    """
    encoding = get_encoding(encoding_id)
    if state.n != encoding.physical_n:
        raise DimensionError(f"Encoding {encoding_id} acts on {encoding.physical_n} qubits, state has {state.n}")
    overrides = sector or {}
    readings = []
    for op in encoding.gauge_ops:
        value = expectation(state, op.string)
        expected = overrides.get(op.name, op.expected)
        flagged = op.role == SECTOR and not isclose(value, expected, abs_tol=tol)
        readings.append(GaugeReading(op.name, str(op.string), op.role, value, expected, flagged))
    report = CodespaceReport(encoding_id, readings)
    if not report.in_codespace:
        logger.debug(f"State outside {encoding_id} codespace: {report.flagged}")
    return report


def computational_labels(encoding: LogicalEncoding) -> List[str]:
    """Basis-state keys "0", "1" (Y1) or "00".."11" (Y2, character k = logical qubit k)."""
    return ["".join(str((a >> k) & 1) for k in range(encoding.n_logical)) for a in range(encoding.dim)]


def gauge_table(encoding_id: str) -> Dict[str, Dict[str, object]]:
    """Per gauge operator: string, role and eigenvalue on every logical basis state."""
    encoding = get_encoding(encoding_id)
    keys = computational_labels(encoding)
    table: Dict[str, Dict[str, object]] = {}
    for op in encoding.gauge_ops:
        values = {}
        for key, amps in zip(keys, encoding.basis):
            values[key] = int(round(expectation(amps, op.string)))
        table[op.name] = {"string": str(op.string), "role": op.role, "values": values}
    return table
