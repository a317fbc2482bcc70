"""Tests for the invariant suites."""

import json

import pytest

from braiding.calibration import load_calibration
from braiding.verification import SUITES, roundtrip_check, run_suite
from braiding import build_gate_circuit


@pytest.fixture
def tampered_fixture(tmp_path, fixture_path):
    document = load_calibration(fixture_path)
    document["protocols"]["S"]["frames"]["000"] = "Z"
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(document))
    return path


class TestSuites:
    """Every suite passes on the shipped fixture."""

    @pytest.mark.parametrize("name", SUITES)
    def test_suite_passes(self, name, fixture_path):
        report = run_suite(name, fixture_path)
        assert report.checks
        assert report.passed, [(c.name, c.detail) for c in report.failures]

    def test_all_prefixes_check_names(self, fixture_path):
        report = run_suite("all", fixture_path)
        assert report.passed
        assert any(c.name.startswith("phases: ") for c in report.checks)
        assert {c.name.split(":")[0] for c in report.checks} == set(SUITES)

    def test_phase_suite_names_gates(self, fixture_path):
        names = [c.name for c in run_suite("phases", fixture_path).checks]
        assert any(name.startswith("S branch 111") for name in names)
        assert any(name.startswith("Tdg raw overlap phase") for name in names)

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("bogus")


class TestTampering:
    """A wrong frame entry names its row."""

    def test_frames_suite_reports_row(self, tampered_fixture):
        report = run_suite("frames", tampered_fixture)
        assert not report.passed
        failure = next(c for c in report.failures if c.name == "S 000")
        assert failure.detail == "fixture Z, derived X"

    def test_report_dict(self, tampered_fixture):
        payload = run_suite("all", tampered_fixture).to_dict()
        assert payload["passed"] is False
        assert {"name": "frames: S 000", "detail": "fixture Z, derived X"} in payload["failures"]


class TestRoundTripCheck:
    """Emit, parse and re-simulate."""

    def test_gate_circuit(self):
        assert roundtrip_check(build_gate_circuit("RxxM", "+,0")) == (True, "")
