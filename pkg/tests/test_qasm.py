"""Tests for OpenQASM 3 emission and parsing."""

from math import pi

import pytest

from braiding import Circuit, build_gate_circuit, circuit_catalog, emit_qasm, parse_qasm
from braiding.circuits import BASIS_GATES, MEASURE
from simulator import QasmParseError

PREAMBLE = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n"


def _rz_angle(expression: str) -> float:
    return parse_qasm(f"{PREAMBLE}qubit[1] q;\nrz({expression}) q[0];\n").ops[0].params[0]


class TestEmit:
    """Program text produced by the emitter."""

    def test_header_and_declarations(self):
        lines = emit_qasm(Circuit(3, 2).gate("h", 0).measure(0, 1)).text.splitlines()
        assert lines[0] == "OPENQASM 3.0;"
        assert lines[1] == 'include "stdgates.inc";'
        assert lines[2] == "qubit[3] q;"
        assert lines[3] == "bit[2] c;"
        assert "h q[0];" in lines
        assert "c[1] = measure q[0];" in lines

    def test_basis_measurement_box(self):
        lines = [line.strip() for line in emit_qasm(Circuit(1, 1).measure(0, 0, basis="y")).text.splitlines()]
        start = lines.index("box {")
        assert lines[start - 1] == "@measure_basis y"
        assert lines[start + 1:start + 7] == ["sdg q[0];", "h q[0];", "c[0] = measure q[0];", "h q[0];", "s q[0];", "}"]

    def test_window_annotation(self):
        text = emit_qasm(Circuit(4, 1).measure(0, 0, basis="x", window=(0, 3))).text
        assert "@window 0 3" in text

    def test_angles_keep_full_precision(self):
        circuit = Circuit(1).gate("rz", 0, params=(0.1,))
        assert "rz(0.10000000000000001) q[0];" in emit_qasm(circuit).text
        assert parse_qasm(emit_qasm(circuit)).ops[0].params == (0.1,)

    def test_negative_angle(self):
        circuit = Circuit(1).gate("rx", 0, params=(-pi / 4,))
        assert parse_qasm(emit_qasm(circuit)).ops[0].params == (-pi / 4,)

    def test_lowered_emission(self):
        text = emit_qasm(build_gate_circuit("T", "+"), lower=True).text
        assert "box" not in text
        parsed = parse_qasm(text)
        assert {op.name for op in parsed.ops if op.kind == "gate"} <= BASIS_GATES

    def test_write(self, tmp_path):
        document = emit_qasm(Circuit(1).gate("x", 0))
        path = tmp_path / "x.qasm"
        document.write(path)
        assert path.read_text() == str(document)


class TestRoundTrip:
    """Parsing the emitter's output restores the circuit."""

    @pytest.mark.parametrize("name", sorted(circuit_catalog()))
    def test_catalog(self, name):
        circuit = circuit_catalog()[name]
        parsed = parse_qasm(emit_qasm(circuit))
        assert parsed.n_qubits == circuit.n_qubits
        assert parsed.n_clbits == circuit.n_clbits
        assert parsed.ops == circuit.ops

    def test_windows_survive(self):
        circuit = build_gate_circuit("S", "0")
        parsed = parse_qasm(emit_qasm(circuit))
        assert [op.window for op in parsed.measurements] == [op.window for op in circuit.measurements]


class TestParse:
    """Accepted input beyond the emitter's own output."""

    def test_arrow_measurement(self):
        circuit = parse_qasm(f"{PREAMBLE}qubit[2] q;\nbit[1] c;\nmeasure q[1] -> c[0];\n")
        assert circuit.ops[0].kind == MEASURE
        assert circuit.ops[0].qubits == (1,)
        assert circuit.ops[0].clbit == 0

    def test_register_measurement(self):
        circuit = parse_qasm(f"{PREAMBLE}qubit[2] q;\nbit[2] c;\nc = measure q;\n")
        assert [(op.qubits, op.clbit) for op in circuit.measurements] == [((0,), 0), ((1,), 1)]

    def test_register_gate_broadcast(self):
        circuit = parse_qasm(f"{PREAMBLE}qubit[3] q;\nh q;\n")
        assert [op.qubits for op in circuit.ops] == [(0,), (1,), (2,)]

    def test_gate_definition_is_inlined(self):
        source = f"{PREAMBLE}gate myh a {{ h a; }}\nqubit[2] q;\nmyh q[1];\n"
        circuit = parse_qasm(source)
        assert [(op.name, op.qubits) for op in circuit.ops] == [("h", (1,))]

    def test_parameterized_definition(self):
        source = (f"{PREAMBLE}gate half(theta) a, b {{ rz(theta / 2) a; cx a, b; }}\n"
                  "qubit[2] q;\nhalf(pi) q[1], q[0];\n")
        ops = parse_qasm(source).ops
        assert (ops[0].name, ops[0].qubits) == ("rz", (1,))
        assert ops[0].params[0] == pytest.approx(pi / 2)
        assert (ops[1].name, ops[1].qubits) == ("cx", (1, 0))

    def test_legacy_registers(self):
        circuit = parse_qasm("OPENQASM 3;\nqreg q[2];\ncreg c[2];\ncx q[0], q[1];\n")
        assert (circuit.n_qubits, circuit.n_clbits) == (2, 2)
        assert circuit.ops[0].qubits == (0, 1)

    def test_comments(self):
        source = f"{PREAMBLE}// line comment\nqubit[1] q; /* block\ncomment */ x q[0];\nh q[0]; // trailing\n"
        assert [op.name for op in parse_qasm(source).ops] == ["x", "h"]

    def test_barrier(self):
        circuit = parse_qasm(f"{PREAMBLE}qubit[3] q;\nbarrier q;\nbarrier q[0], q[2];\n")
        assert circuit.ops[0].qubits == ()
        assert circuit.ops[1].qubits == (0, 2)

    def test_plain_box_is_inlined(self):
        circuit = parse_qasm(f"{PREAMBLE}qubit[1] q;\nbox {{ h q[0]; x q[0]; }}\n")
        assert [op.name for op in circuit.ops] == ["h", "x"]


class TestErrors:
    """Strict mode and error positions."""

    def test_error_position(self):
        source = "OPENQASM 3.0;\nqubit[2] q;\nh q[0];\n  cx q[0], q[5];\n"
        with pytest.raises(QasmParseError) as info:
            parse_qasm(source)
        assert (info.value.line, info.value.column) == (4, 3)

    def test_position_after_block_comment(self):
        source = "OPENQASM 3.0;\n/* one\ntwo */\nqubit[1] q;\nfoo q[0];\n"
        with pytest.raises(QasmParseError) as info:
            parse_qasm(source)
        assert info.value.line == 5

    def test_unsupported_gate_strict(self):
        with pytest.raises(QasmParseError):
            parse_qasm(f"{PREAMBLE}qubit[1] q;\nu3(0, 0, 0) q[0];\n")

    def test_unsupported_statements_skipped_when_lenient(self):
        source = f"{PREAMBLE}qubit[2] q;\nbit[1] c;\nreset q[0];\nif (c[0]) x q[1];\nu3(0, 0, 0) q[0];\nh q[1];\n"
        circuit = parse_qasm(source, strict=False)
        assert [op.name for op in circuit.ops] == ["h"]

    def test_syntax_error_position(self):
        with pytest.raises(QasmParseError) as info:
            parse_qasm("OPENQASM 3.0;\nqubit[1] q;\nh q[0]")
        assert info.value.line == 3

    def test_recursive_definition(self):
        with pytest.raises(QasmParseError):
            parse_qasm(f"{PREAMBLE}gate loop a {{ loop a; }}\nqubit[1] q;\nloop q[0];\n")

    @pytest.mark.parametrize("source", [
        "OPENQASM 3.0;\nh q[0];\n",
        "OPENQASM 3.0;\n",
        "OPENQASM 2.0;\nqubit[1] q;\n",
        "OPENQASM 3.0;\nqubit[1] q;\nbit[1] c;\nmeasure q[0] -> c[3];\n",
        "OPENQASM 3.0;\nqubit[2] q;\nbit[1] c;\nc = measure q;\n",
        "OPENQASM 3.0;\nqubit[1] q;\nrz q[0];\n",
        "OPENQASM 3.0;\nqubit[1] q;\nrz(pi/) q[0];\n",
        "OPENQASM 3.0;\nqubit[1] q;\nbox { h q[0];\n",
        "OPENQASM 3.0;\nqubit[1] q;\nbit[1] c;\n@measure_basis x\nbox { h q[0]; measure q[0] -> c[0]; }\n",
    ])
    def test_rejected_programs(self, source):
        with pytest.raises(QasmParseError):
            parse_qasm(source)


class TestAngles:
    """Parameter expressions."""

    @pytest.mark.parametrize("text, value", [
        ("pi/2", pi / 2), ("-pi", -pi), ("0.25", 0.25), ("2*pi/8", pi / 4), ("1e-3", 1e-3), ("π", pi),
        ("-pi/4", -pi / 4), ("2*pi/3", 2 * pi / 3),
    ])
    def test_values(self, text, value):
        assert _rz_angle(text) == pytest.approx(value)

    @pytest.mark.parametrize("text", ["__import__('os')", "sin(pi)", "theta", "", "1/0"])
    def test_rejects_non_arithmetic(self, text):
        with pytest.raises(QasmParseError):
            _rz_angle(text)
