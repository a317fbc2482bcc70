"""Tests for the HTTP bridge."""

import pytest
from fastapi.testclient import TestClient

from simulation_bridge import app


@pytest.fixture
def client():
    return TestClient(app)


class TestLookups:
    """Read-only endpoints."""

    def test_status(self, client):
        response = client.get("/status")
        assert response.status_code == 200
        payload = response.json()
        assert payload["status"] == "success"
        assert "RxxP" in payload["gates"]
        assert payload["encodings"] == ["Y1", "Y2"]
        assert payload["default_shots"] == 32768

    def test_encoding(self, client):
        payload = client.get("/encodings/Y1").json()
        assert payload["physical_qubits"] == 4
        assert payload["logical_observables"][0] == {"X": "+IIYZ", "Y": "+IIXI", "Z": "-IIZZ"}
        assert payload["gauge_table"]["n"]["values"] == {"0": -1, "1": 1}

    def test_unknown_encoding(self, client):
        response = client.get("/encodings/Y9")
        assert response.status_code == 400
        assert response.json()["status"] == "error"

    def test_frames(self, client):
        payload = client.get("/protocols/T/frames").json()
        assert payload["frames"]["000"] == "X*S"
        assert payload["reference"] == {"column": "S/T", "bit_order": "reversed", "letter_order": "forward",
                                        "matched": True}

    def test_frames_with_angle(self, client):
        payload = client.get("/protocols/Rz/frames", params={"tau": 0.7853981633974483}).json()
        assert payload["frames"]["010"] == "Y*S"
        assert payload["reference"] is None

    def test_angle_without_correction(self, client):
        response = client.get("/protocols/Rz/frames", params={"tau": 0.3})
        assert response.status_code == 400

    def test_unknown_gate(self, client):
        response = client.get("/protocols/CNOT/frames")
        assert response.status_code == 400
        assert "Unknown gate" in response.json()["message"]


class TestExperiments:
    """POST /experiments"""

    def test_exact_single_junction(self, client):
        response = client.post("/experiments", json={"gate": "S", "exact": True})
        assert response.status_code == 200
        payload = response.json()
        assert payload["mode"] == "exact"
        process = [r for r in payload["records"] if r["quantity"] == "process"]
        assert process[0]["value"] == pytest.approx(1.0, abs=1e-9)

    def test_noisy_request(self, client):
        body = {"gate": "S", "labels": "+", "exact": True, "noise_defaults": True, "p_idle": 0.0,
                "trajectories": 4, "seed": 5}
        payload = client.post("/experiments", json=body).json()
        assert payload["mode"] == "noisy-exact"
        assert payload["noise"]["p_idle"] == 0.0

    def test_validation(self, client):
        assert client.post("/experiments", json={"gate": "S", "shots": 0}).status_code == 422

    def test_label_mismatch(self, client):
        response = client.post("/experiments", json={"gate": "RxxP", "labels": "+", "exact": True})
        assert response.status_code == 400


class TestExport:
    """POST /export"""

    def test_qasm(self, client):
        payload = client.post("/export", json={"gate": "S", "labels": "0"}).json()
        assert payload["qasm"].startswith("OPENQASM 3.0;")
        assert payload["operations"]["measure"] == 3

    def test_lowered(self, client):
        payload = client.post("/export", json={"gate": "T", "labels": "+", "lower": True}).json()
        assert "box" not in payload["qasm"]
