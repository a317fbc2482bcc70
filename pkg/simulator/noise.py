"""
Stochastic Pauli noise for the braiding simulator.
Contains the noise model, trajectory-level gate/idle/readout channels and the
exact depolarizing channel used as a tomography oracle.
"""

import logging
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Dict, Sequence, Union

import numpy as np
from dotenv import dotenv_values

from .pauli import PauliString
from .statevector import MeasurementRecord, StateVector

logger = logging.getLogger(__name__)

# Median device calibration figures per encoding (two-qubit CZ, single-qubit SX, readout)
DEVICE_DEFAULTS: Dict[str, Dict[str, float]] = {
    "Y1": {"p1": 2.862e-4, "p2": 3.671e-3, "p_ro": 2.417e-2},
    "Y2": {"p1": 3.053e-4, "p2": 3.848e-3, "p_ro": 2.808e-2},
}
DEFAULT_IDLE = 1e-2

_FILE_KEYS = {"P1": "p1", "P2": "p2", "P_RO": "p_ro", "P_IDLE": "p_idle"}


@dataclass(frozen=True)
class NoiseModel:
    """
    Four-scalar stochastic Pauli noise model.

    Attributes:
        p1: Depolarizing probability after each single-qubit gate
        p2: Depolarizing probability after each multi-qubit gate
        p_ro: Probability of flipping a recorded measurement outcome
        p_idle: Z-flip probability per idle qubit per mid-circuit measurement window
    """

    p1: float = 0.0
    p2: float = 0.0
    p_ro: float = 0.0
    p_idle: float = 0.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"Noise probability {name}={value} outside [0, 1]")

    @classmethod
    def device_defaults(cls, encoding_id: str, p_idle: float = DEFAULT_IDLE) -> "NoiseModel":
        if encoding_id not in DEVICE_DEFAULTS:
            raise ValueError(f"No device defaults for encoding {encoding_id!r}")
        return cls(p_idle=p_idle, **DEVICE_DEFAULTS[encoding_id])

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "NoiseModel":
        """Load a key=value noise file (keys P1, P2, P_RO, P_IDLE)."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Noise file not found: {path}")
        values = dotenv_values(path)
        kwargs = {}
        for key, raw in values.items():
            field_name = _FILE_KEYS.get(key.upper())
            if field_name is None:
                raise ValueError(f"Unknown noise key {key!r} in {path}")
            if raw is None:
                raise ValueError(f"Noise key {key!r} in {path} has no value")
            kwargs[field_name] = float(raw)
        model = cls(**kwargs)
        logger.info(f"Loaded noise model from {path}: {model.to_dict()}")
        return model

    @property
    def is_noiseless(self) -> bool:
        return not any(asdict(self).values())

    def scaled(self, factor: float) -> "NoiseModel":
        """Every probability multiplied by factor and capped at 1."""
        return replace(self, **{k: min(1.0, v * factor) for k, v in asdict(self).items()})

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def _random_pauli_letters(k: int, rng: np.random.Generator) -> str:
    """Uniform non-identity k-qubit Pauli as a letter string."""
    index = int(rng.integers(1, 4 ** k))
    letters = []
    for _ in range(k):
        letters.append("IXYZ"[index % 4])
        index //= 4
    return "".join(letters)


def _apply_letters(state: StateVector, qubits: Sequence[int], letters: str) -> StateVector:
    ops = {q: c for q, c in zip(qubits, letters) if c != "I"}
    return state.apply_pauli(PauliString.from_sparse(state.n, ops))


def apply_gate_noise(state: StateVector, qubits: Sequence[int], model: NoiseModel,
                     rng: np.random.Generator) -> StateVector:
    """With probability p1 (one qubit) or p2 (more), apply a uniform non-identity Pauli on the gate's qubits."""
    p = model.p1 if len(qubits) == 1 else model.p2
    if p <= 0.0 or rng.random() >= p:
        return state
    letters = _random_pauli_letters(len(qubits), rng)
    logger.debug(f"Gate noise {letters} on {tuple(qubits)}")
    return _apply_letters(state, qubits, letters)


def apply_idle_noise(state: StateVector, idle_qubits: Sequence[int], model: NoiseModel,
                     rng: np.random.Generator) -> StateVector:
    """Independent Z flip with probability p_idle on each idle qubit."""
    if model.p_idle <= 0.0 or not idle_qubits:
        return state
    flips = [q for q in idle_qubits if rng.random() < model.p_idle]
    if not flips:
        return state
    return _apply_letters(state, flips, "Z" * len(flips))


def flip_readout(record: MeasurementRecord, p_ro: float, rng: np.random.Generator) -> MeasurementRecord:
    """Return the record with its eigenvalue flipped with probability p_ro."""
    if p_ro <= 0.0 or rng.random() >= p_ro:
        return record
    return replace(record, eigenvalue=-record.eigenvalue)


def depolarizing_channel(rho: np.ndarray, p: float) -> np.ndarray:
    """(1 - p) rho + p I/d."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Depolarizing probability {p} outside [0, 1]")
    dim = rho.shape[0]
    return (1 - p) * rho + p * np.eye(dim, dtype=complex) / dim
