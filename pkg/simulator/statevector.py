"""
Dense statevector engine for the braiding simulator.
Contains gate application, projective measurement of involutory observables,
inner products and the counter-based random streams used for sampling.
"""

import logging
from dataclasses import dataclass
from math import cos, pi, sin, sqrt
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionError, UnknownGateError, ZeroProbabilityError
from .pauli import Observable, PauliSum, as_sum, expectation

logger = logging.getLogger(__name__)

MAX_QUBITS = 24
ZERO_PROBABILITY = 1e-12
NORM_TOLERANCE = 1e-10

# Stream ids for stream_rng
MEASUREMENT_STREAM = 0
NOISE_STREAM = 1
BOOTSTRAP_STREAM = 2

_SQRT2_INV = 1 / sqrt(2)
_T_PHASE = np.exp(1j * pi / 4)

_FIXED_GATES: Dict[str, np.ndarray] = {
    "id": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "h": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "t": np.array([[1, 0], [0, _T_PHASE]], dtype=complex),
    "tdg": np.array([[1, 0], [0, np.conj(_T_PHASE)]], dtype=complex),
    "sx": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    "sxdg": 0.5 * np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex),
}

_PARAM_GATES = {
    "rx": lambda t: np.array([[cos(t / 2), -1j * sin(t / 2)], [-1j * sin(t / 2), cos(t / 2)]], dtype=complex),
    "ry": lambda t: np.array([[cos(t / 2), -sin(t / 2)], [sin(t / 2), cos(t / 2)]], dtype=complex),
    "rz": lambda t: np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=complex),
}

# Controlled gates: name -> (number of controls, target gate)
_CONTROLLED_GATES = {
    "cx": (1, "x"),
    "cy": (1, "y"),
    "cz": (1, "z"),
    "ccx": (2, "x"),
}

GATE_ARITY: Dict[str, int] = {
    **{name: 1 for name in _FIXED_GATES},
    **{name: 1 for name in _PARAM_GATES},
    **{name: controls + 1 for name, (controls, _) in _CONTROLLED_GATES.items()},
}
PARAMETERIZED_GATES = frozenset(_PARAM_GATES)
SUPPORTED_GATES = frozenset(GATE_ARITY)


def gate_matrix(name: str, params: Sequence[float] = ()) -> np.ndarray:
    """
    Unitary for a named gate.

    Multi-qubit matrices are written with the first listed qubit as the most
    significant index (controls before target).
    """
    if name in _FIXED_GATES:
        return _FIXED_GATES[name]
    if name in _PARAM_GATES:
        if len(params) != 1:
            raise ValueError(f"Gate {name} takes exactly one parameter")
        return _PARAM_GATES[name](float(params[0]))
    if name in _CONTROLLED_GATES:
        controls, target = _CONTROLLED_GATES[name]
        dim = 2 ** (controls + 1)
        matrix = np.eye(dim, dtype=complex)
        matrix[dim - 2:, dim - 2:] = _FIXED_GATES[target]
        return matrix
    raise UnknownGateError(f"Unknown gate: {name}")


def apply_matrix(amps: np.ndarray, n: int, matrix: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Apply a k-qubit matrix to the listed qubits (first listed = most significant)."""
    k = len(qubits)
    # reshape([2]*n) puts qubit n-1 on axis 0
    axes = [n - 1 - q for q in qubits]
    psi = np.moveaxis(amps.reshape([2] * n), axes, list(range(k)))
    shape = psi.shape
    psi = (matrix @ psi.reshape(2 ** k, -1)).reshape(shape)
    return np.moveaxis(psi, list(range(k)), axes).reshape(-1)


def stream_rng(seed: Optional[int], index: int = 0, stream: int = MEASUREMENT_STREAM) -> np.random.Generator:
    """
    Counter-based generator addressed by (seed, index, stream).

    The same triple always yields the same stream, independent of how many
    other streams were created or in which order.
    """
    if seed is None:
        return np.random.default_rng()
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index, stream)))


@dataclass
class MeasurementRecord:
    """
    Outcome of one projective measurement.

    Attributes:
        observable: Measured involutory observable
        eigenvalue: +1 or -1
        probability: Born probability of this eigenvalue on the pre-measurement state
        forced: True when the outcome was imposed rather than sampled
    """

    observable: PauliSum
    eigenvalue: int
    probability: float
    forced: bool = False

    @property
    def bit(self) -> int:
        """Outcome bit: 1 for eigenvalue -1."""
        return 0 if self.eigenvalue > 0 else 1


@dataclass
class StateVector:
    """
    Dense complex amplitude vector over 2^n basis states (qubit 0 least significant).

    Attributes:
        n: Number of qubits
        amps: 2^n complex amplitudes
    """

    n: int
    amps: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise DimensionError(f"Qubit count {self.n} outside 1..{MAX_QUBITS}")
        self.amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if self.amps.shape[0] != 1 << self.n:
            raise DimensionError(f"Expected {1 << self.n} amplitudes, got {self.amps.shape[0]}")

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1.0
        return cls(n, amps)

    @classmethod
    def basis(cls, n: int, index: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=complex)
        amps[index] = 1.0
        return cls(n, amps)

    @classmethod
    def from_amplitudes(cls, amps: np.ndarray, normalize: bool = True) -> "StateVector":
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.shape[0])))
        if normalize:
            norm = np.linalg.norm(amps)
            if norm <= ZERO_PROBABILITY:
                raise ZeroProbabilityError("Cannot normalize a zero vector")
            amps = amps / norm
        return cls(n, amps)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "StateVector":
        amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        return cls.from_amplitudes(amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def apply_gate(self, name: str, qubits: Sequence[int], params: Sequence[float] = ()) -> "StateVector":
        return apply_gate(self, name, qubits, params)

    def apply_pauli(self, string) -> "StateVector":
        return StateVector(self.n, string.apply(self.amps))

    def project(self, obs: Observable, sign: int) -> Tuple[float, "StateVector"]:
        return project(self, obs, sign)

    def measure(self, obs: Observable, rng: Optional[np.random.Generator] = None,
                forced: Optional[int] = None) -> Tuple[MeasurementRecord, "StateVector"]:
        return measure(self, obs, rng=rng, forced=forced)

    def expectation(self, obs: Observable) -> float:
        return expectation(self, obs)

    def overlap(self, other: "StateVector") -> complex:
        return overlap(self, other)

    def fidelity(self, other: "StateVector") -> float:
        return fidelity(self, other)


def apply_gate(state: StateVector, name: str, qubits: Sequence[int], params: Sequence[float] = ()) -> StateVector:
    """
    Apply a named gate and return the new state.

    Args:
        state: Input state (left untouched)
        name: Gate name, e.g. "h", "rz", "cx", "ccx"
        qubits: Qubit indices, controls first
        params: Rotation angles in radians for parameterized gates

    Returns:
        U|psi>
    """
    if name not in GATE_ARITY:
        raise UnknownGateError(f"Unknown gate: {name}")
    qubits = tuple(int(q) for q in qubits)
    if len(qubits) != GATE_ARITY[name]:
        raise DimensionError(f"Gate {name} acts on {GATE_ARITY[name]} qubits, got {len(qubits)}")
    if len(set(qubits)) != len(qubits):
        raise DimensionError(f"Gate {name} needs distinct qubits, got {qubits}")
    for q in qubits:
        if not 0 <= q < state.n:
            raise DimensionError(f"Qubit {q} out of range for {state.n} qubits")
    matrix = gate_matrix(name, params)
    return StateVector(state.n, apply_matrix(state.amps, state.n, matrix, qubits))


def projected_amplitudes(amps: np.ndarray, obs: Observable, sign: int) -> np.ndarray:
    """Unnormalized P_sign|psi> = (|psi> + sign*obs|psi>) / 2."""
    return 0.5 * (amps + sign * as_sum(obs).apply(amps))


def project(state: StateVector, obs: Observable, sign: int) -> Tuple[float, StateVector]:
    """
    Project onto the sign eigenspace of an involutory observable.

    Returns:
        (probability, normalized post-measurement state)

    Raises:
        ZeroProbabilityError: If the branch probability is at or below 1e-12
    """
    if sign not in (1, -1):
        raise ValueError(f"Sign must be +1 or -1, got {sign}")
    projected = projected_amplitudes(state.amps, obs, sign)
    probability = float(np.vdot(projected, projected).real)
    if probability <= ZERO_PROBABILITY:
        raise ZeroProbabilityError(f"Branch {sign:+d} of {as_sum(obs)} has probability {probability:.3e}")
    return probability, StateVector(state.n, projected / sqrt(probability))


def measure(state: StateVector, obs: Observable, rng: Optional[np.random.Generator] = None,
            forced: Optional[int] = None) -> Tuple[MeasurementRecord, StateVector]:
    """
    Measure an involutory observable, sampling with Born probabilities or forcing a sign.

    Args:
        state: Pre-measurement state
        obs: Observable with obs^2 = identity
        rng: Generator used when the outcome is sampled
        forced: +1 or -1 to impose the outcome

    Returns:
        (MeasurementRecord, post-measurement state)
    """
    observable = as_sum(obs)
    if forced is not None:
        probability, post = project(state, observable, forced)
        return MeasurementRecord(observable, forced, probability, forced=True), post

    if rng is None:
        rng = np.random.default_rng()
    p_plus = min(max(0.5 * (1 + expectation(state, observable)), 0.0), 1.0)
    sign = 1 if rng.random() < p_plus else -1
    probability, post = project(state, observable, sign)
    logger.debug(f"Measured {observable} -> {sign:+d} (p={probability:.6f})")
    return MeasurementRecord(observable, sign, probability, forced=False), post


def overlap(a: StateVector, b: StateVector) -> complex:
    """Exact inner product <a|b>."""
    if a.n != b.n:
        raise DimensionError(f"Dimension mismatch: {a.n} vs {b.n} qubits")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Global-phase-insensitive |<a|b>|^2 for normalized states."""
    return abs(overlap(a, b)) ** 2
