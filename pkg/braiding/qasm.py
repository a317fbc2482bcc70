"""
OpenQASM 3 emission and parsing for braiding circuits, built on the openqasm3 package.

Programs are printed from an openqasm3 AST and read back with openqasm3.parse; the AST is
then walked into a Circuit. Gate definitions are inlined, register-wide operands broadcast,
and both `measure q -> c;` and `c = measure q;` forms are accepted.

Basis measurements are written as annotated boxes so that parsing restores them as single
operations. External tools see the box form, not a bare basis-change sequence:

    @measure_basis y
    box {
      sdg q[2];
      h q[2];
      c[0] = measure q[2];
      h q[2];
      s q[2];
    }
"""

import io
import logging
import math
import operator
import re
from dataclasses import dataclass
from typing import Dict, List, NoReturn, Optional, Sequence, Set, Tuple

import openqasm3
from openqasm3 import ast
from openqasm3.parser import QASM3ParsingError
from openqasm3.printer import Printer

from simulator.errors import QasmParseError
from simulator.statevector import GATE_ARITY, PARAMETERIZED_GATES

from .circuits import BARRIER, GATE, MEASURE, Circuit, Operation, lower_to_basis

logger = logging.getLogger(__name__)

VERSION = "3.0"
INCLUDE = "stdgates.inc"
ANGLE_FORMAT = ".17g"
QUBIT_REGISTER = "q"
BIT_REGISTER = "c"

_BASIS_CHANGE = {
    "x": (["h"], ["h"]),
    "y": (["sdg", "h"], ["h", "s"]),
}
_BINARY = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv, "**": operator.pow}
_UNARY = {"-": operator.neg}
_CONSTANTS = {"pi": math.pi, "π": math.pi, "tau": math.tau, "τ": math.tau, "𝜏": math.tau,
              "euler": math.e, "ℇ": math.e}
# Older grammar releases carry pi/tau/euler as a dedicated node
_CONSTANT_NODE = getattr(ast, "Constant", None)
_PARSER_POSITION = re.compile(r"L(\d+):C(\d+)")


@dataclass(frozen=True)
class QasmDocument:
    """OpenQASM 3 program text."""

    text: str

    def __str__(self) -> str:
        return self.text

    def write(self, path) -> None:
        with open(path, "w") as f:
            f.write(self.text)


class _AnglePrinter(Printer):
    """Printer that writes float literals with 17 significant digits."""

    def visit_FloatLiteral(self, node: ast.FloatLiteral, context) -> None:
        self.stream.write(format(node.value, ANGLE_FORMAT))


def _qubit(index: int) -> ast.IndexedIdentifier:
    return ast.IndexedIdentifier(ast.Identifier(QUBIT_REGISTER), [[ast.IntegerLiteral(index)]])


def _bit(index: int) -> ast.IndexedIdentifier:
    return ast.IndexedIdentifier(ast.Identifier(BIT_REGISTER), [[ast.IntegerLiteral(index)]])


def _gate(name: str, qubits: Sequence[int], params: Sequence[float] = ()) -> ast.QuantumGate:
    return ast.QuantumGate(
        modifiers=[],
        name=ast.Identifier(name),
        arguments=[ast.FloatLiteral(float(p)) for p in params],
        qubits=[_qubit(q) for q in qubits],
    )


def _measurement(qubit: int, clbit: int) -> ast.QuantumMeasurementStatement:
    return ast.QuantumMeasurementStatement(measure=ast.QuantumMeasurement(qubit=_qubit(qubit)), target=_bit(clbit))


def _annotate(statement: ast.Statement, annotations: List[ast.Annotation]) -> ast.Statement:
    statement.annotations = annotations
    return statement


def _operation_node(op: Operation) -> ast.Statement:
    if op.kind == GATE:
        return _gate(op.name, op.qubits, op.params)
    if op.kind == BARRIER:
        operands = [_qubit(q) for q in op.qubits] if op.qubits else [ast.Identifier(QUBIT_REGISTER)]
        return ast.QuantumBarrier(qubits=operands)
    q = op.qubits[0]
    annotations = [ast.Annotation("window", " ".join(str(w) for w in op.window))] if op.window else []
    if op.basis == "z":
        return _annotate(_measurement(q, op.clbit), annotations)
    before, after = _BASIS_CHANGE[op.basis]
    body = [_gate(g, (q,)) for g in before] + [_measurement(q, op.clbit)] + [_gate(g, (q,)) for g in after]
    annotations.append(ast.Annotation("measure_basis", op.basis))
    return _annotate(ast.Box(duration=None, body=body), annotations)


def build_program(circuit: Circuit) -> ast.Program:
    """openqasm3 AST of a circuit: one `q` register, one `c` register, stdgates names."""
    statements: List[ast.Statement] = [
        ast.Include(INCLUDE),
        ast.QubitDeclaration(qubit=ast.Identifier(QUBIT_REGISTER), size=ast.IntegerLiteral(circuit.n_qubits)),
    ]
    if circuit.n_clbits:
        statements.append(ast.ClassicalDeclaration(
            type=ast.BitType(size=ast.IntegerLiteral(circuit.n_clbits)),
            identifier=ast.Identifier(BIT_REGISTER),
            init_expression=None,
        ))
    statements.extend(_operation_node(op) for op in circuit.ops)
    return ast.Program(statements=statements, version=VERSION)


def emit_qasm(circuit: Circuit, lower: bool = False) -> QasmDocument:
    """
    Serialize a circuit.

    Args:
        circuit: Circuit to emit
        lower: Rewrite into the {cz, rx, rz, sx, x, id} basis first

    Returns:
        QasmDocument printed by openqasm3
    """
    if lower:
        circuit = lower_to_basis(circuit)
    stream = io.StringIO()
    _AnglePrinter(stream).visit(build_program(circuit))
    text = stream.getvalue()
    return QasmDocument(text if text.endswith("\n") else text + "\n")


def _position(node) -> Tuple[int, int]:
    span = getattr(node, "span", None)
    if span is None:
        return 1, 1
    return span.start_line, span.start_column + 1


def evaluate_expression(node: ast.Expression, bindings: Optional[Dict[str, float]] = None) -> float:
    """Value of an arithmetic parameter expression; names resolve through `bindings` or pi/tau/euler."""
    bindings = bindings or {}
    if isinstance(node, (ast.IntegerLiteral, ast.FloatLiteral)):
        return float(node.value)
    if isinstance(node, ast.Identifier):
        if node.name in bindings:
            return bindings[node.name]
        if node.name in _CONSTANTS:
            return _CONSTANTS[node.name]
        raise ValueError(f"Unknown identifier {node.name!r} in parameter expression")
    if _CONSTANT_NODE is not None and isinstance(node, _CONSTANT_NODE):
        return _CONSTANTS[node.name.name]
    if isinstance(node, ast.UnaryExpression) and node.op.name in _UNARY:
        return _UNARY[node.op.name](evaluate_expression(node.expression, bindings))
    if isinstance(node, ast.BinaryExpression) and node.op.name in _BINARY:
        try:
            return _BINARY[node.op.name](evaluate_expression(node.lhs, bindings),
                                         evaluate_expression(node.rhs, bindings))
        except ZeroDivisionError:
            raise ValueError("Division by zero in parameter expression")
    raise ValueError(f"Unsupported parameter expression {type(node).__name__}")


class _Reader:
    """Walks an openqasm3 Program into a Circuit."""

    def __init__(self, strict: bool):
        self.strict = strict
        self.circuit: Optional[Circuit] = None
        self.qubit_register: Optional[str] = None
        self.bit_register: Optional[str] = None
        self.n_clbits = 0
        self.definitions: Dict[str, ast.QuantumGateDefinition] = {}
        self.expanding: Set[str] = set()

    def fail(self, message: str, node) -> NoReturn:
        raise QasmParseError(message, *_position(node))

    def skip(self, message: str, node) -> None:
        if self.strict:
            self.fail(message, node)
        line, column = _position(node)
        logger.warning(f"Skipping {message} at line {line}, column {column}")

    def value(self, expression, node, bindings: Optional[Dict[str, float]] = None) -> float:
        try:
            return evaluate_expression(expression, bindings)
        except ValueError as e:
            self.fail(str(e), node)

    def index(self, expression, node) -> int:
        value = self.value(expression, node)
        if not float(value).is_integer():
            self.fail(f"Non-integer index {value}", node)
        return int(value)

    def read(self, program: ast.Program) -> Circuit:
        if program.version is not None and not program.version.startswith("3"):
            self.fail(f"Unsupported version {program.version!r}", program)
        for statement in program.statements:
            for op in self.statement(statement):
                self.append(op, statement)
        if self.circuit is None:
            raise QasmParseError("No qubit declaration", 1, 1)
        return self.circuit

    def append(self, op: Operation, node) -> None:
        try:
            self.circuit.append(op)
        except (ValueError, KeyError) as e:
            self.fail(str(e), node)

    def statement(self, node) -> List[Operation]:
        if isinstance(node, ast.Include):
            if node.filename != INCLUDE:
                self.skip(f"unsupported include {node.filename!r}", node)
            return []
        if isinstance(node, ast.Pragma):
            return []
        if isinstance(node, ast.QubitDeclaration):
            self.declare_qubits(node)
            return []
        if isinstance(node, ast.ClassicalDeclaration):
            self.declare_bits(node)
            return []
        if isinstance(node, ast.QuantumGateDefinition):
            self.definitions[node.name.name] = node
            return []
        if isinstance(node, ast.QuantumGate):
            return self.gate(node, {}, {}, node)
        if isinstance(node, ast.QuantumPhase):
            return []
        if isinstance(node, ast.QuantumMeasurementStatement):
            return self.measurement(node)
        if isinstance(node, ast.QuantumBarrier):
            return self.barrier(node)
        if isinstance(node, ast.Box):
            return self.box(node)
        self.skip(f"unsupported statement {type(node).__name__}", node)
        return []

    def declare_qubits(self, node: ast.QubitDeclaration) -> None:
        if self.circuit is not None:
            self.fail("Only one qubit register is supported", node)
        size = self.index(node.size, node) if node.size is not None else 1
        if size < 1:
            self.fail(f"Qubit register size must be >= 1, got {size}", node)
        self.qubit_register = node.qubit.name
        self.circuit = Circuit(size, self.n_clbits)

    def declare_bits(self, node: ast.ClassicalDeclaration) -> None:
        if not isinstance(node.type, ast.BitType):
            self.skip(f"unsupported classical type {type(node.type).__name__}", node)
            return
        if self.bit_register is not None:
            self.fail("Only one bit register is supported", node)
        self.bit_register = node.identifier.name
        self.n_clbits = self.index(node.type.size, node) if node.type.size is not None else 1
        if self.circuit is not None:
            self.circuit.n_clbits = self.n_clbits

    def register_operand(self, operand, node, register: Optional[str], size: int, kind: str) -> List[int]:
        if register is None:
            self.fail(f"No {kind} register declared", node)
        if isinstance(operand, ast.Identifier):
            if operand.name != register:
                self.fail(f"Unknown {kind} register {operand.name!r}", node)
            return list(range(size))
        if isinstance(operand, ast.IndexedIdentifier):
            if operand.name.name != register:
                self.fail(f"Unknown {kind} register {operand.name.name!r}", node)
            if len(operand.indices) != 1 or not isinstance(operand.indices[0], list) or len(operand.indices[0]) != 1:
                self.fail(f"Only single {kind} indices are supported", node)
            index = self.index(operand.indices[0][0], node)
            if not 0 <= index < size:
                self.fail(f"{kind.capitalize()} {index} out of range for {size} {kind}s", node)
            return [index]
        self.fail(f"Unsupported {kind} operand {type(operand).__name__}", node)

    def qubits(self, operand, node, scope: Dict[str, int]) -> List[int]:
        if scope:
            if not isinstance(operand, ast.Identifier) or operand.name not in scope:
                self.fail("Gate bodies may only address their own qubit arguments", node)
            return [scope[operand.name]]
        if self.circuit is None:
            self.fail("No qubit register declared", node)
        return self.register_operand(operand, node, self.qubit_register, self.circuit.n_qubits, "qubit")

    def broadcast(self, operands: List[List[int]], node) -> List[Tuple[int, ...]]:
        sizes = {len(o) for o in operands if len(o) > 1}
        if len(sizes) > 1:
            self.fail("Register operands of different sizes", node)
        count = sizes.pop() if sizes else 1
        return [tuple(o[k] if len(o) > 1 else o[0] for o in operands) for k in range(count)]

    def gate(self, node: ast.QuantumGate, scope: Dict[str, int], bindings: Dict[str, float],
             anchor) -> List[Operation]:
        name = node.name.name
        if node.modifiers:
            self.skip(f"gate modifiers on {name!r}", anchor)
            return []
        params = tuple(self.value(arg, anchor, bindings) for arg in node.arguments)
        targets = self.broadcast([self.qubits(q, anchor, scope) for q in node.qubits], anchor)
        if name in self.definitions:
            return [op for qubits in targets for op in self.inline(self.definitions[name], params, qubits, anchor)]
        if name not in GATE_ARITY:
            self.skip(f"unsupported gate {name!r}", anchor)
            return []
        if len(params) != (1 if name in PARAMETERIZED_GATES else 0):
            self.fail(f"Gate {name} has wrong parameter count {len(params)}", anchor)
        return [Operation(GATE, name, qubits, params) for qubits in targets]

    def inline(self, definition: ast.QuantumGateDefinition, params: Tuple[float, ...],
               qubits: Tuple[int, ...], anchor) -> List[Operation]:
        name = definition.name.name
        if name in self.expanding:
            self.fail(f"Recursive gate definition {name!r}", anchor)
        if len(params) != len(definition.arguments) or len(qubits) != len(definition.qubits):
            self.fail(f"Gate {name} expects {len(definition.arguments)} parameters and "
                      f"{len(definition.qubits)} qubits", anchor)
        scope = {q.name: index for q, index in zip(definition.qubits, qubits)}
        bindings = {a.name: value for a, value in zip(definition.arguments, params)}
        self.expanding.add(name)
        ops: List[Operation] = []
        for statement in definition.body:
            if isinstance(statement, ast.QuantumGate):
                ops.extend(self.gate(statement, scope, bindings, anchor))
            elif not isinstance(statement, (ast.QuantumPhase, ast.QuantumBarrier)):
                self.skip(f"unsupported statement {type(statement).__name__} in gate {name!r}", anchor)
        self.expanding.discard(name)
        return ops

    def measurement(self, node: ast.QuantumMeasurementStatement) -> List[Operation]:
        if node.target is None:
            self.skip("measurement without a target bit", node)
            return []
        qubits = self.qubits(node.measure.qubit, node, {})
        clbits = self.register_operand(node.target, node, self.bit_register, self.n_clbits, "bit")
        if len(qubits) != len(clbits):
            self.fail(f"Measuring {len(qubits)} qubits into {len(clbits)} bits", node)
        window = self.window(node)
        return [Operation(MEASURE, "measure", (q,), (), "z", c, window) for q, c in zip(qubits, clbits)]

    def barrier(self, node: ast.QuantumBarrier) -> List[Operation]:
        if all(isinstance(q, ast.Identifier) for q in node.qubits):
            for q in node.qubits:
                self.qubits(q, node, {})
            return [Operation(BARRIER, "barrier")]
        qubits = [index for q in node.qubits for index in self.qubits(q, node, {})]
        return [Operation(BARRIER, "barrier", tuple(qubits))]

    def annotation(self, node, keyword: str) -> Optional[str]:
        for annotation in getattr(node, "annotations", None) or []:
            if annotation.keyword.lstrip("@") == keyword:
                return (annotation.command or "").strip()
        return None

    def window(self, node) -> Tuple[int, ...]:
        command = self.annotation(node, "window")
        if command is None:
            return ()
        try:
            return tuple(int(q) for q in command.split())
        except ValueError:
            self.fail(f"Invalid window annotation {command!r}", node)

    def box(self, node: ast.Box) -> List[Operation]:
        body: List[Operation] = []
        for inner in node.body:
            body.extend(self.statement(inner))
        basis = self.annotation(node, "measure_basis")
        if basis is None:
            return body
        if basis not in _BASIS_CHANGE:
            self.fail(f"Unknown measurement basis {basis!r}", node)
        before, after = _BASIS_CHANGE[basis]
        shape = before + ["measure"] + after
        if [op.name for op in body] != shape or len({op.qubits for op in body}) != 1:
            self.fail(f"Box does not match the {basis}-basis measurement pattern", node)
        measurement = body[len(before)]
        return [Operation(MEASURE, "measure", measurement.qubits, (), basis, measurement.clbit, self.window(node))]


def parse_qasm(document, strict: bool = True) -> Circuit:
    """
    Parse an OpenQASM 3 program into a Circuit.

    Args:
        document: QasmDocument or program text
        strict: Raise on unsupported statements instead of skipping them

    Raises:
        QasmParseError: With the 1-based line and column of the failing statement
    """
    source = document.text if isinstance(document, QasmDocument) else str(document)
    try:
        program = openqasm3.parse(source)
    except QASM3ParsingError as e:
        match = _PARSER_POSITION.search(str(e))
        line, column = (int(match.group(1)), int(match.group(2)) + 1) if match else (1, 1)
        raise QasmParseError(str(e), line, column) from e
    return _Reader(strict).read(program)
