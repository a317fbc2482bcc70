"""Tests for the command-line harness."""

import json

import pytest

import main as cli
from braiding.calibration import load_calibration
from main import EXIT_FAILURE, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from simulator import CodespaceError, ZeroProbabilityError


@pytest.fixture
def tampered_fixture(tmp_path, fixture_path):
    document = load_calibration(fixture_path)
    document["protocols"]["S"]["frames"]["000"] = "Z"
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(document))
    return str(path)


class TestVerify:
    """verify <suite>"""

    def test_passing_suite(self, capsys):
        assert main(["--quiet", "verify", "phases"]) == EXIT_OK
        assert "✓ Suite phases" in capsys.readouterr().out

    def test_banner(self, capsys):
        assert main(["verify", "algebra"]) == EXIT_OK
        assert "GEOMETRIC BRAIDING GATE SIMULATOR" in capsys.readouterr().out

    def test_tampered_fixture(self, capsys, tampered_fixture):
        assert main(["--quiet", "verify", "frames", "--fixture", tampered_fixture]) == EXIT_FAILURE
        assert "❌ S 000: fixture Z, derived X" in capsys.readouterr().out

    @pytest.mark.parametrize("argv", [["verify", "nope"], [], ["experiment"], ["check"]])
    def test_usage_errors(self, argv):
        assert main(argv) == EXIT_USAGE

    def test_help(self):
        assert main(["--help"]) == EXIT_OK

    def test_bad_environment(self, monkeypatch):
        monkeypatch.setenv("BRAIDING_SHOTS", "many")
        assert main(["--quiet", "verify", "algebra"]) == EXIT_USAGE


class TestExperiment:
    """experiment --gate ..."""

    def test_exact_to_stdout(self, capsys):
        assert main(["experiment", "--gate", "S", "--labels", "+", "--exact"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "S |+>" in out
        assert "100.00±0.00%" in out

    def test_csv_output(self, tmp_path):
        out = tmp_path / "results" / "t.csv"
        argv = ["experiment", "--gate", "T", "--exact", "--out", str(out), "--format", "csv"]
        assert main(argv) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "Operation,Quantity,Simulation,Error,Shots,Seed,Mode"
        assert len(lines) == 7

    def test_noise_defaults(self, capsys):
        argv = ["experiment", "--gate", "S", "--labels", "0", "--exact", "--noise-defaults", "--p-idle", "0",
                "--trajectories", "4", "--seed", "1"]
        assert main(argv) == EXIT_OK
        assert "noisy-exact" in capsys.readouterr().out

    def test_unknown_gate(self):
        assert main(["experiment", "--gate", "CNOT", "--exact"]) == EXIT_USAGE

    def test_conflicting_noise_options(self, tmp_path):
        noise = tmp_path / "noise.env"
        noise.write_text("P1=0.001\n")
        argv = ["experiment", "--gate", "S", "--exact", "--noise", str(noise), "--noise-defaults"]
        assert main(argv) == EXIT_USAGE

    def test_missing_noise_file(self, tmp_path):
        argv = ["experiment", "--gate", "S", "--exact", "--noise", str(tmp_path / "absent.env")]
        assert main(argv) == EXIT_IO

    @pytest.mark.parametrize("error", [CodespaceError("input left the codespace"), ZeroProbabilityError("branch vanishes")])
    def test_simulation_failure(self, monkeypatch, capsys, error):
        def fail(config):
            raise error

        monkeypatch.setattr(cli, "run_gate_experiment", fail)
        assert main(["experiment", "--gate", "S", "--exact"]) == EXIT_FAILURE
        assert "Simulation failed" in capsys.readouterr().out


class TestExport:
    """export --gate ... --labels ..."""

    def test_stdout(self, capsys):
        assert main(["export", "--gate", "S", "--labels", "+"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("OPENQASM 3.0;")
        assert "@measure_basis" in out

    def test_lowered_file(self, tmp_path):
        out = tmp_path / "rxx.qasm"
        assert main(["export", "--gate", "Rxx+", "--labels", "0,+", "--lower", "--out", str(out)]) == EXIT_OK
        assert "box" not in out.read_text()

    def test_unwritable_path(self, tmp_path):
        out = tmp_path / "missing" / "s.qasm"
        assert main(["export", "--gate", "S", "--labels", "+", "--out", str(out)]) == EXIT_IO

    def test_bad_labels(self):
        assert main(["export", "--gate", "S", "--labels", "0,1"]) == EXIT_USAGE


class TestCheck:
    """check --roundtrip"""

    def test_catalog_and_random(self, capsys):
        assert main(["check", "--roundtrip", "--random", "10", "--seed", "3"]) == EXIT_OK
        assert "round-trip through OpenQASM 3" in capsys.readouterr().out


class TestDeriveFrames:
    """derive-frames --gate ..."""

    def test_s_table(self, capsys):
        assert main(["derive-frames", "--gate", "S"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "S on Y1: axes (pi/2,0) -> (pi/2,pi/2) -> (0,0)"
        row = next(line for line in lines if line.startswith("000 "))
        assert row.split() == ["000", "X", "000", "X", "derived+table-matched"]

    def test_t_fixups(self, capsys):
        assert main(["derive-frames", "--gate", "T"]) == EXIT_OK
        row = next(line for line in capsys.readouterr().out.splitlines() if line.startswith("010 "))
        assert row.split()[1] == "Y*S"

    def test_identity_has_no_reference(self, capsys):
        assert main(["derive-frames", "--gate", "I"]) == EXIT_OK
        assert "derived" in capsys.readouterr().out

    def test_angle_without_correction(self, capsys):
        assert main(["derive-frames", "--gate", "Rz", "--tau", "0.3"]) == EXIT_USAGE
        assert "❌" in capsys.readouterr().out


class TestCalibrate:
    """calibrate [--check]"""

    def test_check_shipped(self, capsys):
        assert main(["calibrate", "--check"]) == EXIT_OK
        assert "matches the computed calibration" in capsys.readouterr().out

    def test_check_tampered(self, tampered_fixture):
        assert main(["calibrate", "--check", "--fixture", tampered_fixture]) == EXIT_FAILURE

    def test_write(self, tmp_path):
        out = tmp_path / "calibration.json"
        assert main(["calibrate", "--out", str(out)]) == EXIT_OK
        assert load_calibration(out)["version"] == 1
