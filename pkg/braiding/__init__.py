"""
Braiding package for the geometric-gate simulator.
Contains the logical encodings, measurement-based gate protocols, circuits,
OpenQASM export, tomography and the experiment and verification harnesses.
"""

from simulator.errors import (
    SimulationError,
    CodespaceError,
    FrameDerivationError,
    QasmParseError,
)
from .config import Settings, get_settings, configure_logging
from .encoding import (
    LogicalEncoding,
    Junction,
    GaugeOperator,
    CodespaceReport,
    get_encoding,
    build_logical_state,
    logical_observable,
    check_codespace,
    gauge_table,
    canonical_inputs,
    parse_labels,
)
from .protocol import (
    GATE_IDS,
    MeasurementAxis,
    FrameCorrection,
    GateProtocol,
    ProtocolResult,
    gate_sequence,
    ideal_unitary,
    conditional_logical_action,
    raw_overlap,
    branch_probabilities,
    derive_frame_table,
    build_protocol,
    match_reference_table,
    run_protocol,
    post_gate_sector,
)
from .circuits import (
    Circuit,
    Operation,
    CircuitResult,
    build_init_circuit,
    build_readout_circuit,
    build_parity_check,
    build_u023,
    build_gate_circuit,
    simulate_circuit,
    lower_to_basis,
    circuit_catalog,
)
from .qasm import QasmDocument, emit_qasm, parse_qasm
from .tomography import (
    DensityMatrix,
    ChoiMatrix,
    logical_expectations,
    reconstruct,
    state_fidelity,
    process_tomography,
    process_fidelity,
    average_gate_fidelity,
)
from .experiments import ExperimentConfig, ExperimentResult, FidelityRecord, run_gate_experiment, write_csv, write_text
from .calibration import build_calibration, write_calibration, load_calibration, compare_calibration
from .verification import SUITES, SuiteReport, run_suite

__all__ = [
    # Errors
    'SimulationError',
    'CodespaceError',
    'FrameDerivationError',
    'QasmParseError',
    # Configuration
    'Settings',
    'get_settings',
    'configure_logging',
    # Encodings
    'LogicalEncoding',
    'Junction',
    'GaugeOperator',
    'CodespaceReport',
    'get_encoding',
    'build_logical_state',
    'logical_observable',
    'check_codespace',
    'gauge_table',
    'canonical_inputs',
    'parse_labels',
    # Protocols
    'GATE_IDS',
    'MeasurementAxis',
    'FrameCorrection',
    'GateProtocol',
    'ProtocolResult',
    'gate_sequence',
    'ideal_unitary',
    'conditional_logical_action',
    'raw_overlap',
    'branch_probabilities',
    'derive_frame_table',
    'build_protocol',
    'match_reference_table',
    'run_protocol',
    'post_gate_sector',
    # Circuits
    'Circuit',
    'Operation',
    'CircuitResult',
    'build_init_circuit',
    'build_readout_circuit',
    'build_parity_check',
    'build_u023',
    'build_gate_circuit',
    'simulate_circuit',
    'lower_to_basis',
    'circuit_catalog',
    'QasmDocument',
    'emit_qasm',
    'parse_qasm',
    # Tomography
    'DensityMatrix',
    'ChoiMatrix',
    'logical_expectations',
    'reconstruct',
    'state_fidelity',
    'process_tomography',
    'process_fidelity',
    'average_gate_fidelity',
    # Experiments and fixtures
    'ExperimentConfig',
    'ExperimentResult',
    'FidelityRecord',
    'run_gate_experiment',
    'write_csv',
    'write_text',
    'build_calibration',
    'write_calibration',
    'load_calibration',
    'compare_calibration',
    # Verification
    'SUITES',
    'SuiteReport',
    'run_suite',
]
