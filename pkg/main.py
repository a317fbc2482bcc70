"""
Command-line harness for the braiding simulator.
Runs verification suites, gate experiments, circuit export and fixture maintenance.

Exit codes: 0 success, 1 verification or simulation failure, 2 usage error, 3 I/O error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from braiding import (
    SUITES,
    ExperimentConfig,
    build_protocol,
    circuit_catalog,
    configure_logging,
    emit_qasm,
    get_settings,
    match_reference_table,
    run_gate_experiment,
    run_suite,
    write_csv,
    write_text,
)
from braiding.calibration import check_calibration, write_calibration
from braiding.circuits import build_gate_circuit, random_circuit
from braiding.encoding import parse_labels
from braiding.experiments import render_text
from braiding.protocol import REFERENCE_TABLES
from braiding.verification import roundtrip_check
from simulator import FrameDerivationError, NoiseModel, SimulationError, stream_rng

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3


def print_banner():
    """Print welcome banner."""
    banner = """
╔═══════════════════════════════════════════════════════════╗
║                                                           ║
║          ⚛️  GEOMETRIC BRAIDING GATE SIMULATOR ⚛️           ║
║                                                           ║
║  Measurement-based S, T and Rxx gates on junction qubits  ║
║        with Pauli-frame tracking and tomography           ║
║                                                           ║
╚═══════════════════════════════════════════════════════════╝
"""
    print(banner)


def _add_fixture(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--fixture", type=Path, default=None, help="Calibration fixture (default: BRAIDING_FIXTURE)")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(description="Simulate measurement-based geometric gates on encoded qubits.")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--quiet", action="store_true", help="Skip the banner")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run invariant suites")
    verify.add_argument("suite", choices=SUITES + ("all",))
    _add_fixture(verify)

    experiment = sub.add_parser("experiment", help="Run a gate fidelity experiment")
    experiment.add_argument("--gate", required=True)
    experiment.add_argument("--labels", default=None, help='Single input such as "+" or "0,1" (default: all inputs)')
    experiment.add_argument("--shots", type=int, default=settings.shots)
    experiment.add_argument("--seed", type=int, default=settings.seed)
    experiment.add_argument("--exact", action="store_true", help="Exact expectations instead of sampling")
    experiment.add_argument("--noise", type=Path, default=None, help="Noise file with P1, P2, P_RO, P_IDLE")
    experiment.add_argument("--noise-defaults", action="store_true", help="Device defaults for the gate's encoding")
    experiment.add_argument("--p-idle", type=float, default=None, help="Idle flip probability for --noise-defaults")
    experiment.add_argument("--noise-scale", type=float, default=1.0, help="Multiply every noise probability")
    experiment.add_argument("--trajectories", type=int, default=settings.trajectories)
    experiment.add_argument("--bootstrap", type=int, default=settings.bootstrap)
    experiment.add_argument("--tau", type=float, default=None, help="Angle for the Rz gate")
    experiment.add_argument("--out", type=Path, default=None)
    experiment.add_argument("--format", choices=("csv", "txt"), default="txt")

    export = sub.add_parser("export", help="Write a gate circuit as OpenQASM 3")
    export.add_argument("--gate", required=True)
    export.add_argument("--labels", required=True)
    export.add_argument("--format", choices=("qasm3",), default="qasm3")
    export.add_argument("--lower", action="store_true", help="Rewrite into the cz/rx/rz/sx/x basis")
    export.add_argument("--tau", type=float, default=None)
    export.add_argument("--out", type=Path, default=None)

    check = sub.add_parser("check", help="QASM emit/parse checks")
    check.add_argument("--roundtrip", action="store_true", required=True)
    check.add_argument("--random", type=int, default=0, help="Number of additional random circuits")
    check.add_argument("--seed", type=int, default=0)

    frames = sub.add_parser("derive-frames", help="Print the derived frame table of a gate")
    frames.add_argument("--gate", required=True)
    frames.add_argument("--tau", type=float, default=None)

    calibrate = sub.add_parser("calibrate", help="Write or check the calibration fixture")
    calibrate.add_argument("--out", type=Path, default=None)
    calibrate.add_argument("--check", action="store_true", help="Compare with the fixture instead of writing")
    _add_fixture(calibrate)

    serve = sub.add_parser("serve", help="Start the HTTP bridge")
    serve.add_argument("--host", default=settings.bridge_host)
    serve.add_argument("--port", type=int, default=settings.bridge_port)
    return parser


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_suite(args.suite, args.fixture)
    for failure in report.failures:
        print(f"❌ {failure.name}: {failure.detail}")
    if report.passed:
        print(f"✓ Suite {report.name}: {len(report.checks)} checks passed")
        return EXIT_OK
    print(f"❌ Suite {report.name}: {len(report.failures)} of {len(report.checks)} checks failed")
    return EXIT_FAILURE


def _noise_model(args: argparse.Namespace, encoding_id: str) -> Optional[NoiseModel]:
    if args.noise is not None and args.noise_defaults:
        raise ValueError("--noise and --noise-defaults are mutually exclusive")
    if args.noise is not None:
        model = NoiseModel.from_file(args.noise)
    elif args.noise_defaults:
        model = NoiseModel.device_defaults(encoding_id) if args.p_idle is None else \
            NoiseModel.device_defaults(encoding_id, p_idle=args.p_idle)
    else:
        return None
    return model.scaled(args.noise_scale) if args.noise_scale != 1.0 else model


def cmd_experiment(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        gate_id=args.gate,
        labels=parse_labels(args.labels) if args.labels else None,
        shots=args.shots,
        seed=args.seed,
        exact=args.exact,
        trajectories=args.trajectories,
        bootstrap=args.bootstrap,
        tau=args.tau,
    )
    config.noise = _noise_model(args, config.encoding_id)
    logger.debug(f"Experiment {config.gate_id} mode {config.mode}, noise {config.noise}")
    result = run_gate_experiment(config)
    if args.out is None:
        sys.stdout.write(render_text(result))
    elif args.format == "csv":
        write_csv(result, args.out)
        print(f"✓ Wrote {args.out}")
    else:
        write_text(result, args.out)
        print(f"✓ Wrote {args.out}")
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    circuit = build_gate_circuit(args.gate, parse_labels(args.labels), args.tau)
    document = emit_qasm(circuit, lower=args.lower)
    if args.out is None:
        sys.stdout.write(document.text)
    else:
        document.write(args.out)
        print(f"✓ Wrote {args.out}")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    circuits = dict(circuit_catalog())
    rng = stream_rng(args.seed)
    for k in range(args.random):
        n_qubits = int(rng.integers(1, 6))
        circuits[f"random {k}"] = random_circuit(n_qubits, int(rng.integers(1, 30)), rng)
    failures = 0
    for name, circuit in circuits.items():
        passed, detail = roundtrip_check(circuit, seed=args.seed)
        if not passed:
            failures += 1
            print(f"❌ {name}: {detail}")
    if failures:
        print(f"❌ {failures} of {len(circuits)} circuits failed the round trip")
        return EXIT_FAILURE
    print(f"✓ {len(circuits)} circuits round-trip through OpenQASM 3")
    return EXIT_OK


def cmd_derive_frames(args: argparse.Namespace) -> int:
    protocol = build_protocol(args.gate, args.tau)
    match = match_reference_table(protocol.gate_id, protocol.frame_table)
    provenance = "derived+table-matched" if match is not None and match.matched else "derived"
    print(f"{protocol.gate_id} on {protocol.encoding.id}: axes {' -> '.join(a.label() for a in protocol.axes)}")
    if match is not None:
        print(f"reference column {match.column}: bit order {match.bit_order}, letter order {match.letter_order}")
    print(f"{'outcome':<8} {'correction':<11} {'ref key':<8} {'ref entry':<10} provenance")
    for outcomes, correction in sorted(protocol.frame_table.items()):
        key = match.reference_key(outcomes) if match is not None else "-"
        entry = REFERENCE_TABLES[match.column].get(key, "-") if match is not None else "-"
        print(f"{outcomes or '-':<8} {str(correction):<11} {key:<8} {entry:<10} {provenance}")
    if match is not None and not match.matched:
        print(f"⚠️  Rows {', '.join(match.mismatches)} disagree with the reference column")
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    fixture = args.fixture or get_settings().fixture
    if args.check:
        mismatches = check_calibration(fixture)
        for mismatch in mismatches:
            print(f"❌ {mismatch}")
        if mismatches:
            return EXIT_FAILURE
        print(f"✓ {fixture} matches the computed calibration")
        return EXIT_OK
    path = write_calibration(args.out or fixture)
    print(f"✓ Wrote {path}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn
    from simulation_bridge import app

    print("🚀 Starting simulation bridge...")
    print(f"📡 Listening on http://{args.host}:{args.port}")
    print(f"📚 API docs available at: http://{args.host}:{args.port}/docs")
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "experiment": cmd_experiment,
    "export": cmd_export,
    "check": cmd_check,
    "derive-frames": cmd_derive_frames,
    "calibrate": cmd_calibrate,
    "serve": cmd_serve,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    except ValueError as e:
        print(f"❌ Configuration error: {e}")
        return EXIT_USAGE

    configure_logging(verbose=args.verbose)
    if not args.quiet and args.command in ("verify", "serve"):
        print_banner()

    try:
        return COMMANDS[args.command](args)
    except OSError as e:
        print(f"❌ I/O error: {e}")
        return EXIT_IO
    except (ValueError, FrameDerivationError) as e:
        print(f"❌ Error: {e}")
        return EXIT_USAGE
    except SimulationError as e:
        print(f"❌ Simulation failed: {e}")
        return EXIT_FAILURE
    except KeyboardInterrupt:
        print("\n\n⚠️  Interrupted by user")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
