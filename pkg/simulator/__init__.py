"""
Simulator package for the braiding system.
Contains Pauli algebra, the statevector engine and stochastic noise channels.
"""

from .errors import (
    SimulationError,
    ZeroProbabilityError,
    DimensionError,
    UnknownGateError,
    CodespaceError,
    FrameDerivationError,
    QasmParseError,
)
from .pauli import PauliString, PauliSum, mul, commutes, expectation, pauli_strings
from .statevector import (
    StateVector,
    MeasurementRecord,
    apply_gate,
    project,
    measure,
    overlap,
    fidelity,
    gate_matrix,
    stream_rng,
    SUPPORTED_GATES,
    MEASUREMENT_STREAM,
    NOISE_STREAM,
    BOOTSTRAP_STREAM,
)
from .noise import (
    NoiseModel,
    apply_gate_noise,
    apply_idle_noise,
    flip_readout,
    depolarizing_channel,
)

__all__ = [
    # Errors
    'SimulationError',
    'ZeroProbabilityError',
    'DimensionError',
    'UnknownGateError',
    'CodespaceError',
    'FrameDerivationError',
    'QasmParseError',
    # Pauli algebra
    'PauliString',
    'PauliSum',
    'mul',
    'commutes',
    'expectation',
    'pauli_strings',
    # Statevector engine
    'StateVector',
    'MeasurementRecord',
    'apply_gate',
    'project',
    'measure',
    'overlap',
    'fidelity',
    'gate_matrix',
    'stream_rng',
    'SUPPORTED_GATES',
    'MEASUREMENT_STREAM',
    'NOISE_STREAM',
    'BOOTSTRAP_STREAM',
    # Noise
    'NoiseModel',
    'apply_gate_noise',
    'apply_idle_noise',
    'flip_readout',
    'depolarizing_channel',
]
