"""
Logical-basis tomography for the braiding simulator.

Logical Pauli labels carry one character per logical qubit (character k acts
on logical qubit k). Logical matrices use the index a = sum a_k 2^k. The Choi
matrix is sum_ij |i><j| (x) E(|i><j|) with trace d.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh

from simulator import StateVector, expectation

from .encoding import CANONICAL_LABELS, LogicalEncoding, logical_pauli, logical_vector
from .protocol import FrameCorrection, logical_pauli_matrix

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-10


def pauli_labels(n_logical: int, include_identity: bool = False) -> List[str]:
    """All logical Pauli labels in IXYZ order, logical qubit 0 varying fastest."""
    labels = ["".join(reversed(letters)) for letters in product("IXYZ", repeat=n_logical)]
    return labels if include_identity else [label for label in labels if set(label) != {"I"}]


def measurement_settings(n_logical: int) -> List[str]:
    """The 3^k product settings, one axis letter per logical qubit."""
    return ["".join(reversed(letters)) for letters in product("XYZ", repeat=n_logical)]


def _weight(label: str) -> int:
    return sum(1 for c in label if c != "I")


def _compatible(label: str, setting: str) -> bool:
    return all(c == "I" or c == s for c, s in zip(label, setting))


@dataclass
class DensityMatrix:
    """
    Logical density matrix.

    Attributes:
        matrix: dim x dim complex Hermitian matrix
    """

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"Density matrix must be square, got shape {self.matrix.shape}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_logical(self) -> int:
        return int(round(np.log2(self.dim)))

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "DensityMatrix":
        vector = np.asarray(vector, dtype=complex)
        vector = vector / np.linalg.norm(vector)
        return cls(np.outer(vector, vector.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    def is_hermitian(self, tol: float = HERMITIAN_TOLERANCE) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=tol))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        return eigh(0.5 * (self.matrix + self.matrix.conj().T), eigvals_only=True)

    def expectation(self, label: str) -> float:
        return float(np.trace(self.matrix @ logical_pauli_matrix(label)).real)

    def conjugate(self, unitary: np.ndarray) -> "DensityMatrix":
        return DensityMatrix(unitary @ self.matrix @ unitary.conj().T)

    def to_rows(self) -> List[List[Tuple[float, float]]]:
        """Real/imaginary grid for text dumps."""
        return [[(float(v.real), float(v.imag)) for v in row] for row in self.matrix]


@dataclass
class ExpectationData:
    """
    Logical Pauli expectations with standard errors.

    Attributes:
        values: Label -> expectation (identity label excluded)
        stderr: Label -> standard error (0 in exact mode)
        shots: Shots behind each label (0 in exact mode)
    """

    values: Dict[str, float]
    stderr: Dict[str, float] = field(default_factory=dict)
    shots: Dict[str, int] = field(default_factory=dict)


def exact_expectations(state: StateVector, encoding: LogicalEncoding, p_ro: float = 0.0) -> Dict[str, float]:
    """<P_L> for every logical Pauli label, attenuated by (1 - 2 p_ro)^weight."""
    values = {}
    for label in pauli_labels(encoding.n_logical):
        attenuation = (1 - 2 * p_ro) ** _weight(label)
        values[label] = attenuation * expectation(state, logical_pauli(encoding, label))
    return values


def joint_distribution(values: Dict[str, float], setting: str) -> np.ndarray:
    """
    Distribution of the joint +-1 outcomes of a product setting.

    Outcome index o has bit k set when logical qubit k returned -1.
    """
    k = len(setting)
    probabilities = np.zeros(1 << k)
    for outcome in range(1 << k):
        total = 1.0
        for subset in range(1, 1 << k):
            label = "".join(setting[q] if (subset >> q) & 1 else "I" for q in range(k))
            sign = (-1) ** bin(outcome & subset).count("1")
            total += sign * values[label]
        probabilities[outcome] = total / (1 << k)
    probabilities = np.clip(probabilities, 0.0, None)
    return probabilities / probabilities.sum()


def expectations_from_counts(counts: Dict[str, np.ndarray], n_logical: int) -> ExpectationData:
    """
    Pool setting counts into label expectations.

    Args:
        counts: Setting -> outcome counts (index bit k = logical qubit k returned -1)
        n_logical: Number of logical qubits

    Returns:
        ExpectationData with stderr sqrt((1 - <P>^2) / N)
    """
    values, stderr, shots = {}, {}, {}
    for label in pauli_labels(n_logical):
        mask = sum(1 << q for q, c in enumerate(label) if c != "I")
        total, signed = 0, 0.0
        for setting, setting_counts in counts.items():
            if not _compatible(label, setting):
                continue
            for outcome, count in enumerate(setting_counts):
                total += int(count)
                signed += count * (-1) ** bin(outcome & mask).count("1")
        value = signed / total if total else 0.0
        values[label] = value
        shots[label] = total
        stderr[label] = float(np.sqrt(max(0.0, 1 - value ** 2) / total)) if total else 0.0
    return ExpectationData(values, stderr, shots)


def sample_counts(values: Dict[str, float], n_logical: int, shots: int,
                  rng: np.random.Generator) -> Dict[str, np.ndarray]:
    """Multinomial counts per product setting drawn from exact expectations."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    return {setting: rng.multinomial(shots, joint_distribution(values, setting))
            for setting in measurement_settings(n_logical)}


def logical_expectations(state: StateVector, encoding: LogicalEncoding, shots: Optional[int] = None,
                         rng: Optional[np.random.Generator] = None, p_ro: float = 0.0) -> ExpectationData:
    """
    Logical Pauli expectations of a physical state.

    Exact when shots is None; otherwise estimated from `shots` per product setting
    with readout flips of probability p_ro on every logical outcome.
    """
    values = exact_expectations(state, encoding, p_ro)
    if shots is None:
        return ExpectationData(values, {k: 0.0 for k in values}, {k: 0 for k in values})
    if shots == 0:
        raise ValueError("shots must be >= 1")
    rng = rng if rng is not None else np.random.default_rng()
    return expectations_from_counts(sample_counts(values, encoding.n_logical, shots, rng), encoding.n_logical)


def linear_inversion(values: Dict[str, float], n_logical: int) -> np.ndarray:
    """rho = (1/d) sum_P <P> P, identity included with weight 1."""
    dim = 1 << n_logical
    matrix = np.eye(dim, dtype=complex)
    for label in pauli_labels(n_logical):
        matrix = matrix + values.get(label, 0.0) * logical_pauli_matrix(label)
    return matrix / dim


def project_psd(matrix: np.ndarray, trace: float = 1.0) -> np.ndarray:
    """Nearest PSD matrix by eigenvalue clipping, renormalized to the given trace."""
    hermitian = 0.5 * (matrix + matrix.conj().T)
    eigenvalues, vectors = eigh(hermitian)
    clipped = np.clip(eigenvalues, 0.0, None)
    if clipped.sum() <= 0:
        return np.eye(matrix.shape[0], dtype=complex) * trace / matrix.shape[0]
    clipped = clipped * trace / clipped.sum()
    return (vectors * clipped) @ vectors.conj().T


def reconstruct(expectations, n_logical: Optional[int] = None, psd: bool = True) -> DensityMatrix:
    """
    Density matrix from a complete set of logical Pauli expectations.

    Args:
        expectations: ExpectationData or label -> value mapping
        n_logical: Number of logical qubits (inferred from the labels when omitted)
        psd: Project onto the PSD trace-one set after linear inversion
    """
    values = expectations.values if isinstance(expectations, ExpectationData) else dict(expectations)
    if n_logical is None:
        n_logical = len(next(iter(values)))
    missing = set(pauli_labels(n_logical)) - set(values)
    if missing:
        raise ValueError(f"Missing expectations for {sorted(missing)}")
    matrix = linear_inversion(values, n_logical)
    return DensityMatrix(project_psd(matrix) if psd else matrix)


def state_fidelity(rho: DensityMatrix, target: np.ndarray) -> float:
    """<psi| rho |psi> for a pure logical target."""
    target = np.asarray(target, dtype=complex)
    if target.shape != (rho.dim,):
        raise ValueError(f"Target has {target.shape[0]} amplitudes, density matrix has dimension {rho.dim}")
    target = target / np.linalg.norm(target)
    return float(np.vdot(target, rho.matrix @ target).real)


def apply_correction(rho: DensityMatrix, correction: FrameCorrection) -> DensityMatrix:
    """C rho C† for a frame correction."""
    return rho.conjugate(correction.matrix())


@dataclass
class BranchEstimate:
    """Per-outcome-string reconstruction before frame correction."""

    outcomes: str
    weight: float
    rho: DensityMatrix
    correction: FrameCorrection


def aggregate_branches(branches: Sequence[BranchEstimate]) -> DensityMatrix:
    """Frame-corrected, weight-averaged density matrix over outcome strings."""
    total = sum(b.weight for b in branches)
    if total <= 0:
        raise ValueError("No branch carries weight")
    matrix = sum(b.weight * apply_correction(b.rho, b.correction).matrix for b in branches) / total
    return DensityMatrix(matrix)


@dataclass
class ChoiMatrix:
    """
    Choi matrix sum_ij |i><j| (x) E(|i><j|), input factor most significant.

    Attributes:
        matrix: d^2 x d^2 complex matrix with trace d
        dim: Logical dimension d
    """

    matrix: np.ndarray
    dim: int

    def project(self) -> "ChoiMatrix":
        return ChoiMatrix(project_psd(self.matrix, trace=self.dim), self.dim)

    def output_trace_deviation(self) -> float:
        """max |Tr_out(Choi) - I|, zero for trace-preserving maps."""
        d = self.dim
        reduced = np.trace(self.matrix.reshape(d, d, d, d), axis1=1, axis2=3)
        return float(np.abs(reduced - np.eye(d)).max())


# |i><j| on one qubit as combinations of the canonical input states
_OPERATOR_BASIS: Dict[Tuple[int, int], Dict[str, complex]] = {
    (0, 0): {"0": 1},
    (1, 1): {"1": 1},
    (0, 1): {"+": 1, "i+": 1j, "0": -(1 + 1j) / 2, "1": -(1 + 1j) / 2},
    (1, 0): {"+": 1, "i+": -1j, "0": -(1 - 1j) / 2, "1": -(1 - 1j) / 2},
}


def choi_from_outputs(outputs: Dict[Tuple[str, ...], DensityMatrix], n_logical: int) -> ChoiMatrix:
    """
    Choi matrix by linear inversion from the outputs of the canonical inputs.

    Args:
        outputs: Canonical input labels -> output density matrix
        n_logical: Number of logical qubits
    """
    d = 1 << n_logical
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            image = np.zeros((d, d), dtype=complex)
            per_qubit = [_OPERATOR_BASIS[((i >> k) & 1, (j >> k) & 1)] for k in range(n_logical)]
            for combo in product(*[list(p.items()) for p in per_qubit]):
                labels = tuple(label for label, _ in combo)
                coefficient = np.prod([c for _, c in combo])
                image += coefficient * outputs[labels].matrix
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1
            choi += np.kron(unit, image)
    return ChoiMatrix(choi, d)


def process_tomography(runner: Callable[[Tuple[str, ...]], DensityMatrix], n_logical: int) -> ChoiMatrix:
    """Run every canonical input through `runner` and assemble the Choi matrix."""
    outputs = {labels: runner(labels) for labels in product(CANONICAL_LABELS, repeat=n_logical)}
    return choi_from_outputs(outputs, n_logical)


def process_fidelity(choi: ChoiMatrix, unitary: np.ndarray) -> float:
    """<<U| Choi |U>> / d^2 with |U>> = sum_i |i> (x) U|i>."""
    d = choi.dim
    vector = np.concatenate([unitary[:, i] for i in range(d)])
    return float(np.vdot(vector, choi.matrix @ vector).real) / d ** 2


def average_gate_fidelity(process: float, dim: int) -> float:
    return (dim * process + 1) / (dim + 1)


def ideal_output(unitary: np.ndarray, labels: Sequence[str]) -> np.ndarray:
    """U applied to the logical label state."""
    return unitary @ logical_vector(labels)


def bootstrap_stderr(estimates: Sequence[float]) -> float:
    """Sample standard deviation of bootstrap replicates (0 for fewer than two)."""
    if len(estimates) < 2:
        return 0.0
    return float(np.std(np.asarray(estimates), ddof=1))


def resample_counts(counts: Dict[str, np.ndarray], rng: np.random.Generator) -> Dict[str, np.ndarray]:
    """Multinomial resampling of each setting's count table (any shape)."""
    resampled = {}
    for setting, table in counts.items():
        table = np.asarray(table)
        total = int(table.sum())
        if total == 0:
            resampled[setting] = table.copy()
            continue
        flat = rng.multinomial(total, table.reshape(-1) / total)
        resampled[setting] = flat.reshape(table.shape)
    return resampled
