"""Tests for the logical encodings."""

import numpy as np
import pytest

from braiding import (
    build_logical_state,
    canonical_inputs,
    check_codespace,
    gauge_table,
    get_encoding,
    logical_observable,
    parse_labels,
)
from braiding.encoding import from_logical, logical_pauli, to_logical
from simulator import DimensionError, PauliString, StateVector, commutes, expectation, stream_rng

ALL_LABELS = ("0", "1", "+", "-", "i+", "i-")


class TestSingleJunction:
    """Y1: one logical qubit on four physical qubits."""

    def test_shape(self, y1):
        assert y1.physical_n == 4
        assert y1.n_logical == 1
        assert y1.junction.to_dict() == {"center": 0, "z": 1, "y": 2, "x": 3}

    @pytest.mark.parametrize("label", ["0", "1"])
    def test_basis_states_are_gauge_eigenstates(self, y1, label):
        state = build_logical_state("Y1", [label])
        sign = 1 if label == "1" else -1
        for name in ("W1", "W3", "h"):
            assert expectation(state, y1.gauge(name).string) == pytest.approx(-1, abs=1e-12)
        assert expectation(state, y1.gauge("n").string) == pytest.approx(sign, abs=1e-12)

    def test_logical_z(self):
        z = logical_observable("Y1", 0, "Z")
        assert str(z) == "-IIZZ"
        assert expectation(build_logical_state("Y1", ["0"]), z) == pytest.approx(1)
        assert expectation(build_logical_state("Y1", ["1"]), z) == pytest.approx(-1)

    @pytest.mark.parametrize("label, axis", [("+", "X"), ("-", "X"), ("i+", "Y"), ("i-", "Y")])
    def test_superposition_labels(self, label, axis):
        sign = -1 if label.endswith("-") else 1
        state = build_logical_state("Y1", [label])
        assert expectation(state, logical_observable("Y1", 0, axis)) == pytest.approx(sign)

    def test_x_flips_basis(self, y1):
        flipped = y1.logical_ops[0]["X"].apply(y1.basis[0])
        np.testing.assert_allclose(flipped, y1.basis[1], atol=1e-12)


class TestDoubleJunction:
    """Y2: two logical qubits and an ancilla junction."""

    def test_shape(self, y2):
        assert y2.physical_n == 10
        assert y2.n_logical == 2
        assert y2.junction.center == 5

    @pytest.mark.parametrize("labels", canonical_inputs("Y2"))
    def test_canonical_inputs_in_codespace(self, labels):
        report = check_codespace(build_logical_state("Y2", labels), "Y2", tol=1e-12)
        assert report.in_codespace, report.flagged

    def test_basis_is_orthonormal(self, y2):
        gram = np.array([[np.vdot(a, b) for b in y2.basis] for a in y2.basis])
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)

    @pytest.mark.parametrize("k", [0, 1])
    def test_logical_qubits_are_independent(self, y2, k):
        other = 1 - k
        for a in "XYZ":
            assert not commutes(y2.logical_ops[k][a], y2.logical_ops[k]["XYZ"[("XYZ".index(a) + 1) % 3]])
            for b in "XYZ":
                assert commutes(y2.logical_ops[k][a], y2.logical_ops[other][b])

    def test_labels_address_logical_qubits(self):
        state = build_logical_state("Y2", ["1", "0"])
        assert expectation(state, logical_observable("Y2", 0, "Z")) == pytest.approx(-1)
        assert expectation(state, logical_observable("Y2", 1, "Z")) == pytest.approx(1)

    def test_gauge_table(self):
        table = gauge_table("Y2")
        assert set(table) == {"W1", "W2", "W3", "W4", "W5", "h0", "h1", "hA", "n0", "n1"}
        for name in ("W1", "W2", "W3", "W4", "W5", "h0", "h1", "hA"):
            assert set(table[name]["values"].values()) == {-1}
        assert table["n0"]["values"] == {"00": -1, "10": 1, "01": -1, "11": 1}
        assert table["n1"]["values"] == {"00": -1, "10": -1, "01": 1, "11": 1}


class TestLabelsAndStates:
    """Label parsing and logical/physical conversions."""

    def test_parse_labels(self):
        assert parse_labels("+") == ("+",)
        assert parse_labels("0,1") == ("0", "1")
        assert parse_labels("+i, -i") == ("i+", "i-")

    def test_unknown_label(self):
        with pytest.raises(ValueError):
            parse_labels("2")

    def test_label_count(self):
        with pytest.raises(ValueError):
            build_logical_state("Y1", ["0", "1"])

    def test_unknown_encoding(self):
        with pytest.raises(ValueError):
            get_encoding("Y3")

    def test_canonical_inputs(self):
        assert canonical_inputs("Y1") == [("0",), ("1",), ("+",), ("i+",)]
        assert len(canonical_inputs("Y2")) == 16
        assert canonical_inputs("Y2")[1] == ("0", "1")

    @pytest.mark.parametrize("encoding_id", ["Y1", "Y2"])
    def test_logical_roundtrip(self, encoding_id, rng):
        encoding = get_encoding(encoding_id)
        coefficients = rng.normal(size=encoding.dim) + 1j * rng.normal(size=encoding.dim)
        coefficients /= np.linalg.norm(coefficients)
        np.testing.assert_allclose(to_logical(from_logical(encoding, coefficients), encoding), coefficients, atol=1e-12)

    def test_logical_pauli_product(self, y2):
        xz = logical_pauli(y2, "XZ")
        assert xz == y2.logical_ops[0]["X"] * y2.logical_ops[1]["Z"]
        with pytest.raises(DimensionError):
            logical_pauli(y2, "X")


class TestCodespaceReport:
    """Sector operators are flagged; label operators are only reported."""

    @pytest.mark.parametrize("label", ALL_LABELS)
    def test_y1_labels_in_codespace(self, label):
        assert check_codespace(build_logical_state("Y1", [label]), "Y1", tol=1e-12).in_codespace

    def test_out_of_codespace_state(self):
        report = check_codespace(StateVector.random(4, stream_rng(2)), "Y1")
        assert not report.in_codespace
        assert "h" in report.flagged
        assert "n" not in report.flagged

    def test_sector_override(self):
        state = PauliString("XIII").apply(build_logical_state("Y1", ["0"]).amps)
        report = check_codespace(StateVector(4, state), "Y1", sector={"h": 1})
        assert report.values()["h"] == pytest.approx(1)
        assert "h" not in report.flagged

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            check_codespace(StateVector.zero(3), "Y1")
