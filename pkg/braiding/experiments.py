"""
Fidelity experiments for the braiding gates.

An experiment runs one gate on one or all canonical inputs and reports state
fidelities per input plus, for the full input set, the process fidelity.
Three estimation paths exist:

- exact: every outcome string is forced, expectations are exact and the
  frame-corrected branch states are averaged with their Born weights;
- sampled: per product setting, shot counts are drawn with multinomials,
  first over outcome strings (Born weights) and then over joint logical
  outcomes (exact joint distribution of that branch), and reconstructed per
  outcome string. The protocol is not replayed shot by shot; this gives the
  same count distribution. MEASUREMENT_STREAM seeds those multinomial draws
  per input, not a per-shot measurement sequence;
- noisy: the full gate circuit is simulated trajectory by trajectory with
  the noise model, corrected from the recorded bits and averaged. Shots, when
  requested, are drawn from the averaged state.
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from simulator import BOOTSTRAP_STREAM, MEASUREMENT_STREAM, NOISE_STREAM, NoiseModel, stream_rng

from .circuits import build_gate_circuit, simulate_circuit
from .config import DEFAULT_SHOTS
from .encoding import build_logical_state, canonical_inputs, get_encoding, parse_labels
from .protocol import GATE_ENCODINGS, FrameCorrection, GateProtocol, build_protocol, normalize_gate_id, run_protocol
from .tomography import (
    ChoiMatrix,
    DensityMatrix,
    apply_correction,
    average_gate_fidelity,
    bootstrap_stderr,
    choi_from_outputs,
    exact_expectations,
    expectations_from_counts,
    ideal_output,
    joint_distribution,
    linear_inversion,
    measurement_settings,
    pauli_labels,
    process_fidelity,
    project_psd,
    resample_counts,
    state_fidelity,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("Operation", "Quantity", "Simulation", "Error", "Shots", "Seed", "Mode")

Labels = Tuple[str, ...]
Counts = Dict[str, np.ndarray]


@dataclass
class ExperimentConfig:
    """
    One experiment request.

    Attributes:
        gate_id: Gate to run (aliases accepted)
        labels: Single input labels, or None for every canonical input plus the process rows
        shots: Shots per product setting in sampled mode
        seed: Base seed for the measurement, noise and bootstrap streams
        exact: Use exact expectations instead of sampling
        noise: Optional noise model; enables the trajectory path
        trajectories: Noisy trajectories per input
        bootstrap: Bootstrap replicates for sampled error bars
        tau: Angle for the Rz gate
        encoding_id: Encoding for the identity gate (inferred from labels when omitted)
    """

    gate_id: str
    labels: Optional[Labels] = None
    shots: int = DEFAULT_SHOTS
    seed: Optional[int] = None
    exact: bool = False
    noise: Optional[NoiseModel] = None
    trajectories: int = 256
    bootstrap: int = 20
    tau: Optional[float] = None
    encoding_id: Optional[str] = None

    def __post_init__(self):
        self.gate_id = normalize_gate_id(self.gate_id)
        if isinstance(self.labels, str):
            self.labels = parse_labels(self.labels)
        elif self.labels is not None:
            self.labels = tuple(self.labels)
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if self.trajectories < 1:
            raise ValueError(f"trajectories must be >= 1, got {self.trajectories}")
        if self.bootstrap < 0:
            raise ValueError(f"bootstrap must be >= 0, got {self.bootstrap}")
        if self.gate_id != "I":
            self.encoding_id = GATE_ENCODINGS[self.gate_id]
        elif self.encoding_id is None:
            self.encoding_id = "Y2" if self.labels is not None and len(self.labels) == 2 else "Y1"
        n_logical = get_encoding(self.encoding_id).n_logical
        if self.labels is not None and len(self.labels) != n_logical:
            raise ValueError(f"Gate {self.gate_id} on {self.encoding_id} needs {n_logical} labels, got {len(self.labels)}")

    @property
    def noisy(self) -> bool:
        return self.noise is not None and not self.noise.is_noiseless

    @property
    def mode(self) -> str:
        base = "exact" if self.exact else "sampled"
        return f"noisy-{base}" if self.noisy else base

    @property
    def recorded_shots(self) -> int:
        return 0 if self.exact else self.shots


@dataclass
class FidelityRecord:
    """
    One row of an experiment table.

    Attributes:
        operation: Row label, e.g. "S |+>" or "S process"
        quantity: "state", "process" or "average"
        value: Fidelity in [0, 1]
        stderr: Bootstrap standard error (0 in exact mode)
        shots: Shots per setting (0 in exact mode)
        seed: Base seed, None when nondeterministic
        mode: exact, sampled, noisy-exact or noisy-sampled
        labels: Input labels for state rows
    """

    operation: str
    quantity: str
    value: float
    stderr: float
    shots: int
    seed: Optional[int]
    mode: str
    labels: Optional[Labels] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "operation": self.operation,
            "quantity": self.quantity,
            "value": self.value,
            "stderr": self.stderr,
            "shots": self.shots,
            "seed": self.seed,
            "mode": self.mode,
            "labels": list(self.labels) if self.labels is not None else None,
        }


@dataclass
class ExperimentResult:
    """
    Everything an experiment produced.

    Attributes:
        config: The request
        records: State rows in input order, then process and average-gate rows
        outputs: Label text -> frame-corrected output density matrix
        choi: Choi matrix when every canonical input was run
        branch_frequencies: Label text -> outcome string -> observed frequency
    """

    config: ExperimentConfig
    records: List[FidelityRecord]
    outputs: Dict[str, DensityMatrix]
    choi: Optional[ChoiMatrix] = None
    branch_frequencies: Dict[str, Dict[str, float]] = field(default_factory=dict)

    @property
    def process_fidelity(self) -> Optional[float]:
        for record in self.records:
            if record.quantity == "process":
                return record.value
        return None

    def to_dict(self) -> Dict[str, object]:
        return {
            "gate": self.config.gate_id,
            "encoding": self.config.encoding_id,
            "mode": self.config.mode,
            "shots": self.config.recorded_shots,
            "seed": self.config.seed,
            "noise": self.config.noise.to_dict() if self.config.noise is not None else None,
            "records": [r.to_dict() for r in self.records],
            "branch_frequencies": self.branch_frequencies,
        }


def label_text(labels: Sequence[str]) -> str:
    return ",".join(labels)


@dataclass
class _InputRun:
    """Per-input data: outcome strings with their corrections and either exact or counted statistics."""

    labels: Labels
    branches: List[str]
    corrections: List[FrameCorrection]
    weights: List[float] = field(default_factory=list)
    values: List[Dict[str, float]] = field(default_factory=list)
    counts: Optional[Counts] = None


def _exact_matrix(run: _InputRun, n_logical: int) -> np.ndarray:
    total = sum(run.weights)
    matrix = np.zeros((1 << n_logical, 1 << n_logical), dtype=complex)
    for weight, values, correction in zip(run.weights, run.values, run.corrections):
        rho = DensityMatrix(linear_inversion(values, n_logical))
        matrix += weight * apply_correction(rho, correction).matrix
    return matrix / total


def _counted_matrix(counts: Counts, run: _InputRun, n_logical: int) -> np.ndarray:
    """Branch-wise reconstruction from counts shaped (outcome strings, joint outcomes)."""
    total = sum(int(table.sum()) for table in counts.values())
    matrix = np.zeros((1 << n_logical, 1 << n_logical), dtype=complex)
    for b, correction in enumerate(run.corrections):
        branch_counts = {setting: table[b] for setting, table in counts.items()}
        weight = sum(int(c.sum()) for c in branch_counts.values())
        if weight == 0:
            continue
        data = expectations_from_counts(branch_counts, n_logical)
        rho = DensityMatrix(linear_inversion(data.values, n_logical))
        matrix += weight * apply_correction(rho, correction).matrix
    return matrix / total


def _estimate(run: _InputRun, n_logical: int, counts: Optional[Counts] = None) -> DensityMatrix:
    counts = counts if counts is not None else run.counts
    matrix = _exact_matrix(run, n_logical) if counts is None else _counted_matrix(counts, run, n_logical)
    return DensityMatrix(project_psd(matrix))


def _sample(run: _InputRun, shots: int, n_logical: int, rng: np.random.Generator) -> Counts:
    probabilities = np.asarray(run.weights, dtype=float)
    probabilities = probabilities / probabilities.sum()
    counts: Counts = {}
    for setting in measurement_settings(n_logical):
        table = np.zeros((len(run.branches), 1 << n_logical), dtype=np.int64)
        for b, n_branch in enumerate(rng.multinomial(shots, probabilities)):
            if n_branch:
                table[b] = rng.multinomial(n_branch, joint_distribution(run.values[b], setting))
        counts[setting] = table
    return counts


def _noiseless_run(protocol: GateProtocol, labels: Labels) -> _InputRun:
    encoding = protocol.encoding
    state = build_logical_state(encoding.id, labels)
    run = _InputRun(labels, list(protocol.frame_table), list(protocol.frame_table.values()))
    for outcomes in run.branches:
        result = run_protocol(state, protocol.gate_id, forced=outcomes, tau=protocol.tau, encoding_id=encoding.id)
        run.weights.append(result.probability)
        run.values.append(exact_expectations(result.state, encoding))
    return run


def _trajectory_run(config: ExperimentConfig, protocol: GateProtocol, labels: Labels, first_stream: int) -> _InputRun:
    """Average of frame-corrected trajectory states, folded into a single pre-corrected branch."""
    encoding = protocol.encoding
    n_logical = encoding.n_logical
    circuit = build_gate_circuit(protocol.gate_id, labels, protocol.tau)
    identity = FrameCorrection("I" * n_logical)
    matrix = np.zeros((encoding.dim, encoding.dim), dtype=complex)
    missing = 0
    for t in range(config.trajectories):
        stream = first_stream + t
        result = simulate_circuit(
            circuit,
            rng=stream_rng(config.seed, stream, MEASUREMENT_STREAM),
            noise=config.noise,
            noise_rng=stream_rng(config.seed, stream, NOISE_STREAM),
        )
        correction = protocol.frame_table.get(result.clbits)
        if correction is None:
            missing += 1
            correction = identity
        values = exact_expectations(result.state, encoding, config.noise.p_ro)
        rho = DensityMatrix(linear_inversion(values, n_logical))
        matrix += apply_correction(rho, correction).matrix
    if missing:
        logger.warning(f"{protocol.gate_id} {label_text(labels)}: {missing} trajectories hit an outcome string without a frame entry")
    average = DensityMatrix(matrix / config.trajectories)
    values = {label: average.expectation(label) for label in pauli_labels(n_logical)}
    return _InputRun(labels, [""], [identity], weights=[1.0], values=[values])


def _branch_frequencies(run: _InputRun) -> Dict[str, float]:
    if run.counts is None:
        total = sum(run.weights)
        return {outcomes: w / total for outcomes, w in zip(run.branches, run.weights)}
    per_branch = sum(table.sum(axis=1) for table in run.counts.values())
    total = per_branch.sum()
    return {outcomes: float(n) / total for outcomes, n in zip(run.branches, per_branch)}


def run_gate_experiment(config: ExperimentConfig) -> ExperimentResult:
    """
    Run a gate experiment.

    Args:
        config: Gate, inputs, shots, seed, mode and noise

    Returns:
        ExperimentResult with one state row per input and, when every canonical
        input was run, process and average-gate-fidelity rows
    """
    protocol = build_protocol(config.gate_id, config.tau, config.encoding_id)
    encoding = protocol.encoding
    n_logical = encoding.n_logical
    inputs = [config.labels] if config.labels is not None else canonical_inputs(encoding.id)
    logger.info(f"Running {config.gate_id} on {encoding.id}: {len(inputs)} input(s), mode {config.mode}")

    runs: List[_InputRun] = []
    for index, labels in enumerate(inputs):
        if config.noisy:
            # trajectory streams start after the per-input sampling streams
            run = _trajectory_run(config, protocol, labels, len(inputs) + index * config.trajectories)
        else:
            run = _noiseless_run(protocol, labels)
        if not config.exact:
            run.counts = _sample(run, config.shots, n_logical, stream_rng(config.seed, index, MEASUREMENT_STREAM))
        runs.append(run)

    outputs = {label_text(run.labels): _estimate(run, n_logical) for run in runs}
    targets = [ideal_output(protocol.ideal, run.labels) for run in runs]
    state_values = [state_fidelity(outputs[label_text(run.labels)], target) for run, target in zip(runs, targets)]
    full = config.labels is None
    choi = choi_from_outputs({run.labels: outputs[label_text(run.labels)] for run in runs}, n_logical) if full else None
    process_value = process_fidelity(choi, protocol.ideal) if full else None

    state_errors = [0.0] * len(runs)
    process_error = 0.0
    if not config.exact and config.bootstrap > 0:
        rng = stream_rng(config.seed, 0, BOOTSTRAP_STREAM)
        state_samples: List[List[float]] = [[] for _ in runs]
        process_samples: List[float] = []
        for _ in range(config.bootstrap):
            replicate = {}
            for k, (run, target) in enumerate(zip(runs, targets)):
                rho = _estimate(run, n_logical, resample_counts(run.counts, rng))
                replicate[run.labels] = rho
                state_samples[k].append(state_fidelity(rho, target))
            if full:
                process_samples.append(process_fidelity(choi_from_outputs(replicate, n_logical), protocol.ideal))
        state_errors = [bootstrap_stderr(samples) for samples in state_samples]
        process_error = bootstrap_stderr(process_samples)

    common = {"shots": config.recorded_shots, "seed": config.seed, "mode": config.mode}
    records = [
        FidelityRecord(f"{config.gate_id} |{label_text(run.labels)}>", "state", value, error, labels=run.labels, **common)
        for run, value, error in zip(runs, state_values, state_errors)
    ]
    if full:
        d = encoding.dim
        records.append(FidelityRecord(f"{config.gate_id} process", "process", process_value, process_error, **common))
        records.append(FidelityRecord(f"{config.gate_id} average gate", "average",
                                      average_gate_fidelity(process_value, d), d * process_error / (d + 1), **common))
        logger.info(f"{config.gate_id}: process fidelity {process_value:.6f} ± {process_error:.6f}")

    return ExperimentResult(
        config=config,
        records=records,
        outputs=outputs,
        choi=choi,
        branch_frequencies={label_text(run.labels): _branch_frequencies(run) for run in runs},
    )


def _records(source: Union[ExperimentResult, Sequence[FidelityRecord]]) -> List[FidelityRecord]:
    return list(source.records) if isinstance(source, ExperimentResult) else list(source)


def write_csv(source: Union[ExperimentResult, Sequence[FidelityRecord]], path: Union[str, Path]) -> Path:
    """Write fidelity rows (Operation, Quantity, Simulation, Error, Shots, Seed, Mode)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in _records(source):
            seed = "" if r.seed is None else r.seed
            writer.writerow([r.operation, r.quantity, f"{r.value:.6f}", f"{r.stderr:.6f}", r.shots, seed, r.mode])
    logger.info(f"Wrote {path}")
    return path


def _percent(value: float, error: float) -> str:
    return f"{100 * value:.2f}±{100 * error:.2f}%"


def render_text(result: ExperimentResult) -> str:
    """Structured text: fidelity table followed by real/imag density-matrix grids."""
    config = result.config
    seed = "none" if config.seed is None else config.seed
    lines = [
        f"# {config.gate_id} on {config.encoding_id}  mode={config.mode}  shots={config.recorded_shots}  seed={seed}",
        f"{'Operation':<24} {'Quantity':<9} {'Simulation':>16}",
    ]
    for r in result.records:
        lines.append(f"{r.operation:<24} {r.quantity:<9} {_percent(r.value, r.stderr):>16}")
    lines.append("")
    lines.append("# Output density matrices (real, imag)")
    for text, rho in result.outputs.items():
        lines.append(f"|{text}>")
        for row in rho.to_rows():
            lines.append("  " + "  ".join(f"{re:+.6f}{im:+.6f}i" for re, im in row))
    return "\n".join(lines) + "\n"


def write_text(result: ExperimentResult, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_text(result), encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path
